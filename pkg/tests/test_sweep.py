import math
from dataclasses import replace

import numpy as np
import pytest

from decoshell.params import ModelParams, derive_condensate
from decoshell.propagator import gamma_min, kernel_point, solve_branches
from decoshell.rates import rate_resonant
from decoshell.resonance import shell_point
from decoshell.sweep import (Axis, Grid, NoPeakError, PLATFORM_PRESETS,
                             get_platform, peak_over_v, platform_curves,
                             rows_to_csv, run_grid, write_csv)


def test_axis_validation():
    with pytest.raises(ValueError):
        Axis("v_rel", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        Axis("v_rel", 1.0, 0.5, 5)
    with pytest.raises(ValueError):
        Axis("v_rel", 0.1, 1.0, 5, scale="cubic")
    assert len(Axis("v_rel", 0.1, 1.0, 7, scale="log").values()) == 7


def test_v_grid_straddles_threshold():
    u = ModelParams().u_phi
    grid = Grid(axes=(Axis("v_rel", 0.5 * 2 * u, 1.5 * 2 * u, 11),))
    rows = run_grid(grid, "resonant")
    for row in rows:
        assert row["error"] == ""
        if row["v_rel"] <= 2 * u:
            assert row["value"] == 0.0
        else:
            assert row["value"] > 0.0


def test_va_grid_threshold_independent_of_separation():
    u = ModelParams().u_phi
    grid = Grid(axes=(Axis("a_sep", 0.5, 2.0, 4),
                      Axis("v_rel", 0.5 * 2 * u, 1.5 * 2 * u, 9)))
    rows = run_grid(grid, "resonant")
    onsets = {}
    for row in rows:
        if row["value"] > 0:
            a = row["a_sep"]
            onsets.setdefault(a, row["v_rel"])
            onsets[a] = min(onsets[a], row["v_rel"])
    assert len(set(onsets.values())) == 1


def test_separation_grid_at_three_screening_masses():
    base = ModelParams(m_phi=1.0)
    slopes = {}
    for e in (0.75, 1.0, 1.5):
        p = replace(base, e_charge=e)
        grid = Grid(axes=(Axis("a_sep", 1.0, 3.0, 7),),
                    overrides={"e_charge": e, "m_phi": 1.0})
        rows = run_grid(grid, "resonant")
        avals = np.array([r["a_sep"] for r in rows])
        logs = np.log([r["value"] for r in rows])
        slopes[e] = np.polyfit(avals, logs, 1)[0]
    assert slopes[0.75] > slopes[1.0] > slopes[1.5]


def test_run_grid_records_errors_per_point():
    # mu below the condensation edge fails the derivation for that row only
    grid = Grid(axes=(Axis("mu", 0.0001, 1.0, 4),),
                overrides={"m_psi": 0.5})
    rows = run_grid(grid, "resonant")
    failed = [r for r in rows if r["error"]]
    ok = [r for r in rows if not r["error"]]
    assert failed and ok
    assert "PhaseError" in failed[0]["error"]
    assert math.isnan(failed[0]["value"])


def test_run_grid_coherence_quantity():
    u = ModelParams().u_phi
    grid = Grid(axes=(Axis("v_rel", 1.2 * 2 * u, 1.6 * 2 * u, 3),))
    rows = run_grid(grid, "coherence")
    for row in rows:
        assert 0.0 < row["value"] <= 1.0


def test_run_grid_deterministic_and_parallel_consistent():
    u = ModelParams().u_phi
    grid = Grid(axes=(Axis("v_rel", 0.9 * 2 * u, 1.4 * 2 * u, 6),))
    rows1 = run_grid(grid, "resonant", threads=1)
    rows2 = run_grid(grid, "resonant", threads=1)
    assert rows_to_csv(rows1) == rows_to_csv(rows2)
    rows_par = run_grid(grid, "resonant", threads=2)
    assert rows_to_csv(rows_par) == rows_to_csv(rows1)


def test_csv_format(tmp_path):
    rows = [{"x": 1.0, "note": 'needs,"quoting"', "n": 3}]
    text = rows_to_csv(rows)
    header, line = text.splitlines()
    assert header == "x,note,n"
    assert line.startswith("1.0000000000e+00,")
    assert '"needs,""quoting"""' in line
    out = tmp_path / "t.csv"
    write_csv(rows, out)
    assert out.read_text() == text


def test_peak_over_v_against_dense_grid():
    p = replace(ModelParams(), a_sep=4.0)
    lo, hi = 1.05 * 2 * p.u_phi, 12.0 * 2 * p.u_phi
    v_peak, r_max = peak_over_v(p, 1.0, (lo, hi))
    d = derive_condensate(replace(p, mu=1.0))
    dense = max(rate_resonant(replace(p, mu=1.0, v_rel=float(v)), d).value
                for v in np.linspace(lo, hi, 10_000))
    assert r_max == pytest.approx(dense, rel=1e-4)
    assert lo < v_peak < hi


def test_peak_over_v_monotone_raises():
    # the rising flank alone has its maximum on the range boundary
    p = replace(ModelParams(), a_sep=4.0)
    with pytest.raises(NoPeakError):
        peak_over_v(p, 1.0, (1.05 * 2 * p.u_phi, 2.0 * 2 * p.u_phi))


def test_peak_over_v_flat_raises():
    # fully below threshold: identically zero, no peak to report
    p = ModelParams()
    with pytest.raises(NoPeakError):
        peak_over_v(p, 1.0, (0.2 * 2 * p.u_phi, 0.8 * 2 * p.u_phi))


def test_platform_registry_ratios():
    assert get_platform("bec").a_over_xi == pytest.approx(16.0)
    assert get_platform("cold_atoms").a_over_xi == pytest.approx(20.0 / 3.0)
    assert get_platform("graphene").a_over_xi == pytest.approx(2.0 / 3.0)
    assert get_platform("plasmonic").a_over_xi == pytest.approx(2.0)
    with pytest.raises(KeyError):
        get_platform("holodeck")


def test_platform_curves_normalized_and_gated():
    data = platform_curves(v_points=np.linspace(0.5, 2.0, 13))
    assert set(data["curves"]) == set(PLATFORM_PRESETS)
    for name, curve in data["curves"].items():
        below = data["ratios"] <= 1.0
        assert np.all(curve[below] == 0.0)
        assert curve.max() == pytest.approx(1.0)
        assert np.any(curve[~below] > 0.0)


def test_platform_curves_rejects_empty():
    with pytest.raises(ValueError):
        platform_curves(presets=[])


def test_gamma_min_helper():
    p = ModelParams(m_phi=1.0)
    d = derive_condensate(p)
    sp = shell_point(p, 0.0)
    kp = kernel_point(d, p, sp.omega_star, sp.momentum)
    b = solve_branches(kp, d.c_mix)
    assert gamma_min(b) == min(b.gamma1.real, b.gamma2.real)
    assert gamma_min(b) > 0
