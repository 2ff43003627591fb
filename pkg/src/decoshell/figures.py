"""Figure datasets: the parameter scans behind the standard plots.

Each builder returns a dict with ``columns`` (header), ``rows`` (the CSV
payload), a rendering ``kind`` ("line" with x in the first column, or
"heatmap" with x, y, z columns) and axis labels.  The CSV written by the CLI
is the authoritative dataset; SVG rendering is a convenience view.

Datasets 4 and 7-10 use ideal spectral lines (sharp threshold); 5 and 6 use
the Lorentzian-broadened machinery.  Datasets 6 and 8 override the transverse
mass scale to the narrow-beta regime (m_phi = 1), where the attenuation is
uniform across the relevant momenta and the narrow-width / pure-exponential
behavior is cleanest; 10 runs at a larger separation (a_sep = 4) so the
screening growth overtakes the coupling growth inside the scanned window.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .dispersion import MomentumPoint
from .kernels import retarded_matrix
from .params import ModelParams, derive_condensate
from .propagator import dressed_inter
from .rates import overlap_weight_closed, rate_regularized, rate_resonant
from .resonance import shell_point
from .sweep import PLATFORM_PRESETS, peak_over_v, platform_curves


def _ratios(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _rate_at_ratio(p: ModelParams, d, ratio: float) -> float:
    return rate_resonant(replace(p, v_rel=float(ratio) * 2.0 * p.u_phi), d).value


def fig4(p: ModelParams | None = None, n_v: int = 41) -> dict:
    """Resonant rate versus v/(2 u_phi): zero below 1, finite above."""
    p = p or ModelParams()
    d = derive_condensate(p)
    ratios = _ratios(0.5, 2.5, n_v)
    rows = [[float(r), _rate_at_ratio(p, d, r)] for r in ratios]
    return {"columns": ["v_over_2uphi", "rate_resonant"], "rows": rows,
            "kind": "line", "xlabel": "v / (2 u_phi)", "ylabel": "rate density",
            "title": "Resonant cross rate vs velocity"}


def fig5(p: ModelParams | None = None, n_v: int = 41) -> dict:
    """Cross kernels at a fixed momentum versus velocity.

    The retarded entry stays finite and continuous through the threshold;
    the broadened on-shell noise weight (overlap weight times the inter-plate
    kernel magnitude) collapses below it.  The momentum is pinned to the
    shell of v = 3 u_phi.
    """
    p = p or ModelParams()
    d = derive_condensate(p)
    sp = shell_point(replace(p, v_rel=3.0 * p.u_phi), 0.0)
    k_ref = MomentumPoint(sp.kx_star, 0.0)
    gam = p.gamma_phi if p.gamma_phi > 0 else 1e-3 * sp.omega_star
    p_g = replace(p, gamma_phi=gam)
    inv_u2 = 1.0 / (p.u_psi * p.u_psi)
    kpar2 = k_ref.kpar_sq
    rows = []
    for r in _ratios(0.5, 2.5, n_v):
        v = float(r) * 2.0 * p.u_phi
        om_hat = 0.5 * v * k_ref.kx
        dr_ab = retarded_matrix(d, p, om_hat, k_ref).ab
        delta = kpar2 + d.m_H ** 2 - (om_hat + 1e-9j) ** 2 * inv_u2
        g = dressed_inter(delta, kpar2 + d.m_A ** 2, d.c_mix, p.a_sep)
        shell_noise = (d.lambda_A * d.lambda_B) ** 2 \
            * overlap_weight_closed(p_g, v, k_ref) * abs(g) ** 2
        rows.append([float(r), dr_ab.real, shell_noise])
    return {"columns": ["v_over_2uphi", "re_retarded_ab", "shell_noise_ab"],
            "rows": rows, "kind": "line", "xlabel": "v / (2 u_phi)",
            "ylabel": "kernel value",
            "title": "Retarded vs noise cross kernel across threshold"}


def fig6(p: ModelParams | None = None, n_v: int = 17,
         gamma_fractions: tuple[float, ...] = (1e-1, 1e-2, 1e-3)) -> dict:
    """Broadened rate versus velocity for several linewidths, with the
    ideal-line limit column."""
    p = replace(p or ModelParams(), m_phi=1.0)
    d = derive_condensate(p)
    sp_ref = shell_point(replace(p, v_rel=3.0 * p.u_phi), 0.0)
    ratios = _ratios(0.8, 1.8, n_v)
    columns = ["v_over_2uphi"] + [f"rate_gamma_{f:.0e}" for f in gamma_fractions] \
        + ["rate_narrow_limit"]
    rows = []
    for r in ratios:
        v = float(r) * 2.0 * p.u_phi
        row = [float(r)]
        for frac in gamma_fractions:
            pg = replace(p, v_rel=v, gamma_phi=frac * sp_ref.omega_star)
            row.append(rate_regularized(pg, d).value)
        row.append(rate_resonant(replace(p, v_rel=v), d).value)
        rows.append(row)
    return {"columns": columns, "rows": rows, "kind": "line",
            "xlabel": "v / (2 u_phi)", "ylabel": "rate density",
            "title": "Linewidth regularization of the threshold"}


def fig7(p: ModelParams | None = None, n_v: int = 16, n_a: int = 13) -> dict:
    """Rate over the (velocity, separation) plane; the threshold line is
    vertical (independent of separation)."""
    p = p or ModelParams()
    d = derive_condensate(p)
    rows = []
    for a in _ratios(0.5, 3.5, n_a):
        pa = replace(p, a_sep=float(a))
        for r in _ratios(0.5, 2.0, n_v):
            rows.append([float(r), float(a), _rate_at_ratio(pa, d, r)])
    return {"columns": ["v_over_2uphi", "a_sep", "rate_resonant"], "rows": rows,
            "kind": "heatmap", "xlabel": "v / (2 u_phi)", "ylabel": "a_sep",
            "title": "Rate over velocity and separation"}


def fig8(p: ModelParams | None = None, n_a: int = 16,
         e_charges: tuple[float, ...] = (0.75, 1.0, 1.5)) -> dict:
    """Normalized rate versus separation for several screening masses."""
    p = replace(p or ModelParams(), m_phi=1.0)
    columns = ["a_sep"]
    curves = []
    for e in e_charges:
        pe = replace(p, e_charge=e)
        d = derive_condensate(pe)
        columns.append(f"norm_rate_mA_{d.m_A:.4g}")
        r0 = rate_resonant(replace(pe, a_sep=0.0), d).value
        curves.append((pe, d, r0))
    avals = _ratios(0.25, 4.0, n_a)
    rows = []
    for a in avals:
        row = [float(a)]
        for pe, d, r0 in curves:
            row.append(rate_resonant(replace(pe, a_sep=float(a)), d).value / r0)
        rows.append(row)
    return {"columns": columns, "rows": rows, "kind": "line", "logy": True,
            "xlabel": "a_sep", "ylabel": "rate(a) / rate(0)",
            "title": "Separation decay for different screening masses"}


def fig9(p: ModelParams | None = None, n_v: int = 18,
         mus: tuple[float, ...] = (0.8, 1.2, 1.8, 2.2)) -> dict:
    """Rate versus velocity for several chemical potentials; common onset."""
    p = p or ModelParams()
    ratios = _ratios(0.8, 2.5, n_v)
    columns = ["v_over_2uphi"] + [f"rate_mu_{m:.4g}" for m in mus]
    per_mu = [(replace(p, mu=m), derive_condensate(replace(p, mu=m))) for m in mus]
    rows = []
    for r in ratios:
        row = [float(r)]
        for pm, d in per_mu:
            row.append(_rate_at_ratio(pm, d, r))
        rows.append(row)
    return {"columns": columns, "rows": rows, "kind": "line",
            "xlabel": "v / (2 u_phi)", "ylabel": "rate density",
            "title": "Velocity scans at several chemical potentials"}


def fig10(p: ModelParams | None = None, n_mu: int = 13) -> dict:
    """Peak rate versus chemical potential: coupling growth against
    screening, with an interior maximum."""
    p = replace(p or ModelParams(), a_sep=4.0)
    rows = []
    for mu in _ratios(0.6, 3.0, n_mu):
        v_lo = 1.05 * 2.0 * p.u_phi
        v_hi = 12.0 * 2.0 * p.u_phi
        v_peak, r_max = peak_over_v(p, float(mu), (v_lo, v_hi))
        rows.append([float(mu), v_peak / (2.0 * p.u_phi), r_max])
    return {"columns": ["mu", "v_peak_over_2uphi", "rate_max"], "rows": rows,
            "kind": "line", "xlabel": "mu", "ylabel": "peak rate density",
            "title": "Peak rate vs chemical potential"}


def fig11(p: ModelParams | None = None, n_v: int = 16) -> dict:
    """Normalized platform curves sharing the onset at v/(2 u_phi) = 1."""
    data = platform_curves(list(PLATFORM_PRESETS), _ratios(0.5, 2.0, n_v),
                           base=p)
    columns = ["v_over_2uphi"] + list(data["curves"])
    rows = []
    for i, r in enumerate(data["ratios"]):
        rows.append([float(r)] + [float(data["curves"][name][i])
                                  for name in data["curves"]])
    return {"columns": columns, "rows": rows, "kind": "line",
            "xlabel": "v / (2 u_phi)", "ylabel": "normalized rate",
            "title": "Platform comparison (normalized)"}


FIGURES = {4: fig4, 5: fig5, 6: fig6, 7: fig7, 8: fig8, 9: fig9,
           10: fig10, 11: fig11}


def render_svg(data: dict, path) -> None:
    """Render a builder result to SVG (dispatches on the dataset kind)."""
    from . import svgplot
    cols = data["columns"]
    rows = data["rows"]
    if data["kind"] == "heatmap":
        xs = sorted({row[0] for row in rows})
        ys = sorted({row[1] for row in rows})
        lookup = {(row[0], row[1]): row[2] for row in rows}
        z = [[lookup[(x, y)] for x in xs] for y in ys]
        svgplot.heatmap(path, xs, ys, z, title=data.get("title", ""),
                        xlabel=data.get("xlabel", ""), ylabel=data.get("ylabel", ""))
        return
    xs = [row[0] for row in rows]
    series = {cols[j]: [row[j] for row in rows] for j in range(1, len(cols))}
    # log scale when values span many decades
    finite = [v for ys in series.values() for v in ys
              if v is not None and math.isfinite(v) and v > 0]
    logy = bool(data.get("logy")) or (
        len(finite) > 1 and max(finite) / max(min(finite), 1e-300) > 1e4)
    svgplot.line_chart(path, xs, series, title=data.get("title", ""),
                       xlabel=data.get("xlabel", ""),
                       ylabel=data.get("ylabel", ""), logy=logy)
