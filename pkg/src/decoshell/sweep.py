"""Parameter grids, peak finding, platform presets and CSV output.

Grids are evaluated point by point (optionally in a process pool); rows come
back in axis-major order regardless of parallelism and per-point failures are
recorded in the row rather than aborting the sweep.  CSV output is RFC-4180
quoted with scientific notation at 11 significant digits, so identical grids
and tolerances produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dynamics import History, coherence
from .params import ModelParams, derive_condensate
from .rates import RateResult, im_gamma_cross, rate_regularized, rate_resonant

QUANTITIES = ("resonant", "regularized", "im_gamma", "coherence")
FLOAT_FORMAT = "%.10e"


class NoPeakError(RuntimeError):
    """Peak search found no interior maximum (monotone or flat data)."""


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"   # or "log"

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("axis needs count >= 2")
        if self.stop <= self.start:
            raise ValueError("axis needs stop > start")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"unknown axis scale {self.scale!r}")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class Grid:
    axes: tuple[Axis, ...]
    overrides: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PlatformPreset:
    """Published operating point: boundary velocity, gap and correlation
    length in SI units.  The model bridge measures lengths in units of the
    correlation length xi (so the screening scale is one inverse length unit)
    and scans the dimensionless ratio v / (2 u_phi)."""

    name: str
    u_phi_si: float   # m/s
    a_si: float       # m
    xi_si: float      # m

    def __post_init__(self):
        if min(self.u_phi_si, self.a_si, self.xi_si) <= 0:
            raise ValueError("platform preset values must be positive")

    @property
    def a_over_xi(self) -> float:
        return self.a_si / self.xi_si


PLATFORM_PRESETS: dict[str, PlatformPreset] = {
    "bec": PlatformPreset("BEC", 2.0e-3, 4e-6, 0.25e-6),
    "cold_atoms": PlatformPreset("Cold atoms", 1.6e-3, 2.0e-6, 0.3e-6),
    "graphene": PlatformPreset("Graphene (Doppler)", 1.0e6, 20e-9, 30e-9),
    "plasmonic": PlatformPreset("Plasmonic confinement", 2.41e7, 40e-9, 20e-9),
}


def get_platform(name: str) -> PlatformPreset:
    key = name.strip().lower().replace(" ", "_")
    if key not in PLATFORM_PRESETS:
        raise KeyError(f"unknown platform {name!r}; "
                       f"known: {', '.join(PLATFORM_PRESETS)}")
    return PLATFORM_PRESETS[key]


def evaluate_quantity(p: ModelParams, quantity: str) -> RateResult | float:
    if quantity not in QUANTITIES:
        raise ValueError(f"quantity must be one of {QUANTITIES}, got {quantity!r}")
    d = derive_condensate(p)
    if quantity == "resonant":
        return rate_resonant(p, d)
    if quantity == "im_gamma":
        return im_gamma_cross(p, d)
    if quantity == "regularized":
        return rate_regularized(p, d)
    # coherence of a unit stationary history
    return coherence(History(), rate_resonant(p, d))


def _eval_point(task):
    base_kwargs, axis_items, quantity = task
    row = dict(axis_items)
    try:
        p = ModelParams(**{**base_kwargs, **dict(axis_items)})
        result = evaluate_quantity(p, quantity)
        if isinstance(result, RateResult):
            row.update(value=result.value, abs_err=result.abs_err,
                       n_evals=result.n_evals, mode=result.mode, error="")
        else:
            row.update(value=result, abs_err=0.0, n_evals=0,
                       mode=quantity, error="")
    except Exception as exc:   # per-point failures are data, not crashes
        row.update(value=math.nan, abs_err=math.nan, n_evals=0,
                   mode=quantity, error=f"{type(exc).__name__}: {exc}")
    return row


def _params_as_kwargs(p: ModelParams) -> dict:
    return {f: getattr(p, f) for f in p.__dataclass_fields__}


def resolve_threads(threads: int | None) -> int:
    """None -> env DECOSHELL_THREADS -> 1; 0 means one worker per CPU."""
    if threads is None:
        threads = int(os.environ.get("DECOSHELL_THREADS", "1") or 1)
    if threads == 0:
        threads = os.cpu_count() or 1
    return max(1, threads)


def run_grid(grid: Grid, quantity: str, base: ModelParams | None = None,
             threads: int | None = None) -> list[dict]:
    """Evaluate ``quantity`` on every grid point, axis-major order."""
    base_kwargs = _params_as_kwargs(base if base is not None else ModelParams())
    base_kwargs.update(grid.overrides)
    axes_values = [axis.values() for axis in grid.axes]
    names = [axis.name for axis in grid.axes]
    tasks = []
    idx = np.ndindex(*(len(v) for v in axes_values))
    for multi in idx:
        axis_items = tuple((names[i], float(axes_values[i][j]))
                           for i, j in enumerate(multi))
        tasks.append((base_kwargs, axis_items, quantity))
    nworkers = resolve_threads(threads)
    if nworkers == 1 or len(tasks) < 4:
        return [_eval_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=nworkers) as pool:
        # map preserves task order, so parallel output equals serial output
        return list(pool.map(_eval_point, tasks, chunksize=4))


def rows_to_csv(rows: list[dict], header: list[str] | None = None) -> str:
    """RFC-4180 CSV with '.' decimals and >= 10 significant digits."""
    if not rows:
        return ""
    header = header or list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        out = []
        for key in header:
            val = row[key]
            if isinstance(val, float):
                out.append(FLOAT_FORMAT % val)
            else:
                out.append(val)
        writer.writerow(out)
    return buf.getvalue()


def write_csv(rows: list[dict], path: str | Path,
              header: list[str] | None = None) -> None:
    Path(path).write_text(rows_to_csv(rows, header))


# --------------------------------------------------------------------------
# peak finding

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, rel_tol: float) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi]; deterministic."""
    a, b = lo, hi
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > rel_tol * max(abs(a), abs(b)):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = f(x1)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def peak_over_v(p_template: ModelParams, mu: float,
                v_range: tuple[float, float], *,
                coarse: int = 25, rel_tol: float = 1e-6,
                flat_tol: float = 1e-12) -> tuple[float, float]:
    """Locate the velocity maximizing the resonant rate at chemical
    potential ``mu``: coarse scan, then golden-section refinement.

    Raises NoPeakError when the coarse scan is monotone (maximum on the
    boundary) or flat to ``flat_tol`` relative.
    """
    p_mu = replace(p_template, mu=mu)
    d = derive_condensate(p_mu)

    def rate_at(v: float) -> float:
        return rate_resonant(replace(p_mu, v_rel=v), d).value

    vs = np.linspace(v_range[0], v_range[1], coarse)
    vals = np.array([rate_at(float(v)) for v in vs])
    top = vals.max()
    if top <= 0.0 or (top - vals.min()) <= flat_tol * top:
        raise NoPeakError("rate is flat over the velocity range")
    i = int(np.argmax(vals))
    if i == 0 or i == len(vs) - 1:
        raise NoPeakError("rate is monotone over the velocity range "
                          f"(maximum at boundary v = {vs[i]:g})")
    return _golden_max(rate_at, float(vs[i - 1]), float(vs[i + 1]), rel_tol)


# --------------------------------------------------------------------------
# platform comparison

def platform_curves(presets: list[str] | None = None,
                    v_points: np.ndarray | None = None,
                    base: ModelParams | None = None) -> dict:
    """Normalized resonant-rate curves versus v/(2 u_phi) for each preset.

    Unit bridge: lengths in units of each preset's correlation length xi
    (the shared dimensionless condensate defaults give screening mass 1 in
    those units), separation a_sep = a/xi, and the velocity axis is the
    dimensionless threshold ratio.  Each curve is normalized by its own
    maximum over the scan.
    """
    if presets is None:
        presets = list(PLATFORM_PRESETS)
    if not presets:
        raise ValueError("presets must be nonempty")
    ratios = np.linspace(0.5, 2.0, 16) if v_points is None else np.asarray(v_points, float)
    base = base if base is not None else ModelParams()
    curves: dict[str, np.ndarray] = {}
    a_over_xi: dict[str, float] = {}
    for name in presets:
        preset = get_platform(name)
        p0 = replace(base, a_sep=preset.a_over_xi)
        d = derive_condensate(p0)
        vals = np.array([
            rate_resonant(replace(p0, v_rel=float(r) * 2.0 * p0.u_phi), d).value
            for r in ratios])
        top = vals.max()
        if top <= 0.0:
            raise ValueError(f"no scanned point above threshold for {name!r}")
        curves[name] = vals / top
        a_over_xi[name] = preset.a_over_xi
    return {"ratios": ratios, "curves": curves, "a_over_xi": a_over_xi}
