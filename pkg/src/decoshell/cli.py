"""Command-line front end.

Subcommands: derive, shell, rate, sweep, figure, platforms, selftest.
Exit codes: 0 success, 1 selftest failure, 2 phase error, 3 numeric failure,
4 bad usage.  ``--threads`` (or DECOSHELL_THREADS) controls sweep parallelism,
0 meaning one worker per CPU.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import figures, sweep
from .dispersion import MomentumPoint
from .params import (ConfigError, ModelParams, PhaseError, derive_condensate,
                     load_config, params_from_config, parse_overrides,
                     validate_regime)
from .propagator import KernelPoint, g_inter, solve_branches
from .rates import QuadratureError

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_PHASE = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract says 4
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="decoshell",
                     description="Motion-activated correlated decoherence toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", type=Path, default=None,
                        help="key=value parameter file")
        sp.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a parameter (repeatable)")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker processes for sweeps (0 = auto)")

    sp = sub.add_parser("derive", help="print condensate-derived quantities")
    common(sp)

    sp = sub.add_parser("shell", help="print the on-shell point")
    common(sp)
    sp.add_argument("--ky", type=float, default=0.0)

    sp = sub.add_parser("rate", help="compute a rate density")
    common(sp)
    sp.add_argument("--quantity", default="resonant", choices=sweep.QUANTITIES)

    sp = sub.add_parser("sweep", help="run a parameter grid, write CSV")
    common(sp)
    sp.add_argument("--quantity", default="resonant", choices=sweep.QUANTITIES)
    sp.add_argument("--axis", action="append", required=True,
                    metavar="NAME:MIN:MAX:COUNT[:SCALE]",
                    help="grid axis over a parameter (max 2, repeatable)")
    sp.add_argument("--out", type=Path, required=True, help="output CSV path")
    sp.add_argument("--svg", action="store_true", help="also write an SVG chart")

    sp = sub.add_parser("figure", help="write the dataset behind a figure")
    common(sp)
    sp.add_argument("number", type=int, nargs="?", default=None,
                    help="figure number (4-11)")
    sp.add_argument("--figure", type=int, default=None, dest="figure_flag",
                    help="figure number (alternative to the positional)")
    sp.add_argument("--out", type=Path, default=Path("."),
                    help="output directory")
    sp.add_argument("--svg", action="store_true", help="also write figN.svg")

    sp = sub.add_parser("platforms", help="print the platform preset registry")
    sp.add_argument("--out", type=Path, default=None, help="optional CSV path")

    sp = sub.add_parser("selftest", help="run the fast invariant suite")
    return parser


def _load_params(args) -> ModelParams:
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    overrides = parse_overrides(getattr(args, "overrides", []) or [])
    return params_from_config(cfg, overrides)


def _print_warnings(p: ModelParams, d) -> None:
    for w in validate_regime(p, d):
        print(f"warning: {w.message}", file=sys.stderr)


def cmd_derive(args) -> int:
    p = _load_params(args)
    d = derive_condensate(p)
    _print_warnings(p, d)
    for name in ("rho0", "lambda_A", "lambda_B", "m_A", "c_mix", "m_H"):
        print(f"{name:10s} = {getattr(d, name):.12g}")
    return EXIT_OK


def cmd_shell(args) -> int:
    from .resonance import shell_point
    p = _load_params(args)
    sp = shell_point(p, args.ky)
    for name in ("kx_star", "omega_star", "jacobian_w", "ky", "beta2"):
        print(f"{name:12s} = {getattr(sp, name):.12g}")
    print(f"{'near_thresh':12s} = {sp.near_threshold}")
    return EXIT_OK


def cmd_rate(args) -> int:
    p = _load_params(args)
    d = derive_condensate(p)
    _print_warnings(p, d)
    result = sweep.evaluate_quantity(p, args.quantity)
    if isinstance(result, float):
        print(f"coherence  = {result:.12g}")
        return EXIT_OK
    print(f"mode       = {result.mode}")
    print(f"value      = {result.value:.12g}")
    print(f"abs_err    = {result.abs_err:.3g}")
    print(f"n_evals    = {result.n_evals}")
    for key, val in result.meta.items():
        print(f"meta.{key} = {val}")
    return EXIT_OK


def _parse_axis(spec: str) -> sweep.Axis:
    parts = spec.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(f"axis spec must be NAME:MIN:MAX:COUNT[:SCALE], got {spec!r}")
    name, lo, hi, count = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
    scale = parts[4] if len(parts) == 5 else "linear"
    return sweep.Axis(name, lo, hi, count, scale)


def cmd_sweep(args) -> int:
    if len(args.axis) > 2:
        raise ConfigError("at most 2 axes are supported")
    p = _load_params(args)
    grid = sweep.Grid(axes=tuple(_parse_axis(s) for s in args.axis))
    rows = sweep.run_grid(grid, args.quantity, base=p, threads=args.threads)
    sweep.write_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    failures = [r for r in rows if r["error"]]
    if failures:
        print(f"{len(failures)} grid points failed; first: "
              f"{failures[0]['error']}", file=sys.stderr)
    if args.svg:
        _sweep_svg(rows, grid, args.out.with_suffix(".svg"), args.quantity)
        print(f"wrote {args.out.with_suffix('.svg')}")
    return EXIT_OK


def _sweep_svg(rows, grid, path, quantity) -> None:
    from . import svgplot
    names = [a.name for a in grid.axes]
    if len(names) == 1:
        xs = [r[names[0]] for r in rows]
        svgplot.line_chart(path, xs, {quantity: [r["value"] for r in rows]},
                           xlabel=names[0], ylabel=quantity)
    else:
        xs = sorted({r[names[1]] for r in rows})
        ys = sorted({r[names[0]] for r in rows})
        lookup = {(r[names[0]], r[names[1]]): r["value"] for r in rows}
        z = [[lookup[(y, x)] for x in xs] for y in ys]
        svgplot.heatmap(path, xs, ys, z, xlabel=names[1], ylabel=names[0])


def cmd_figure(args) -> int:
    number = args.figure_flag if args.figure_flag is not None else args.number
    if number is None:
        raise ConfigError("figure number required (positional or --figure)")
    if number not in figures.FIGURES:
        raise ConfigError(f"unknown figure {number}; available: "
                          f"{sorted(figures.FIGURES)}")
    p = _load_params(args)
    data = figures.FIGURES[number](p)
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / f"fig{number}.csv"
    rows = [dict(zip(data["columns"], row)) for row in data["rows"]]
    sweep.write_csv(rows, csv_path, header=data["columns"])
    print(f"wrote {csv_path}")
    if args.svg:
        svg_path = args.out / f"fig{number}.svg"
        figures.render_svg(data, svg_path)
        print(f"wrote {svg_path}")
    return EXIT_OK


def cmd_platforms(args) -> int:
    header = ["key", "name", "u_phi_m_per_s", "a_m", "xi_m", "a_over_xi"]
    rows = []
    for key, preset in sweep.PLATFORM_PRESETS.items():
        rows.append(dict(zip(header, [key, preset.name, preset.u_phi_si,
                                      preset.a_si, preset.xi_si,
                                      preset.a_over_xi])))
        print(f"{key:12s} {preset.name:24s} u_phi={preset.u_phi_si:<10.3g} "
              f"a={preset.a_si:<9.3g} xi={preset.xi_si:<9.3g} "
              f"a/xi={preset.a_over_xi:.6g}")
    if args.out:
        sweep.write_csv(rows, args.out, header=header)
        print(f"wrote {args.out}")
    return EXIT_OK


# --------------------------------------------------------------------------
# selftest: the fast invariant suite


def _check_pole_residuals() -> None:
    from .propagator import solve_branches as solve
    rng = np.random.default_rng(11)
    for _ in range(10_000):
        dh = rng.uniform(-20.0, 20.0)
        k2 = rng.uniform(0.01, 30.0)
        c = rng.uniform(0.0, 8.0)
        kp = KernelPoint(omega=0.0, k=MomentumPoint(0.0, 0.0),
                         kappa=math.sqrt(k2), delta_h=dh, inv_u2=1.0)
        b = solve(kp, c, eps_ret=0.0)
        norm = max(1.0, abs(dh + k2), abs(dh * k2 - c * c))
        for g in (b.gamma1, b.gamma2):
            x = g * g
            resid = abs(x * x - (dh + k2) * x + (dh * k2 - c * c))
            assert resid < 1e-10 * norm, f"pole residual {resid:g}"


def _check_threshold_exactness() -> None:
    from .rates import rate_resonant
    rng = np.random.default_rng(13)
    for _ in range(40):
        u = rng.uniform(0.005, 0.02)
        ratio = rng.uniform(0.3, 1.9)
        if abs(ratio - 1.0) < 2e-3:
            ratio += 5e-3
        p = ModelParams(u_phi=u, m_phi=rng.uniform(0.5, 2.5) / u,
                        v_rel=ratio * 2 * u, a_sep=rng.uniform(0.5, 1.5),
                        m_H=rng.uniform(8.0, 16.0))
        d = derive_condensate(p)
        r = rate_resonant(p, d)
        if ratio < 1.0:
            assert r.value == 0.0, f"nonzero below threshold: {r.value:g}"
        else:
            assert r.value > 0.0, "zero above threshold"


def _check_jacobian() -> None:
    from .resonance import jacobian_check
    rng = np.random.default_rng(17)
    for _ in range(25):
        u = rng.uniform(0.005, 0.05)
        p = ModelParams(u_phi=u, m_phi=rng.uniform(0.5, 2.0) / u,
                        v_rel=rng.uniform(1.1, 3.0) * 2 * u)
        resid = jacobian_check(p, rng.uniform(-2.0, 2.0))
        target = (p.v_rel ** 2 - 4 * p.u_phi ** 2) / p.v_rel
        assert abs(resid) < 1e-6 * target, f"jacobian residual {resid:g}"


def _check_decoupling() -> None:
    rng = np.random.default_rng(19)
    for _ in range(200):
        dh = rng.uniform(0.05, 20.0)
        k2 = rng.uniform(0.05, 20.0)
        a = rng.uniform(0.0, 3.0)
        kp = KernelPoint(omega=0.0, k=MomentumPoint(0.0, 0.0),
                         kappa=math.sqrt(k2), delta_h=dh, inv_u2=1.0)
        b = solve_branches(kp, 0.0, eps_ret=0.0)
        val = abs(g_inter(b, kp, a))
        ref = math.exp(-math.sqrt(dh) * a) / (2.0 * math.sqrt(dh))
        assert abs(val - ref) <= 1e-12 * ref, f"decoupling off: {val!r} vs {ref!r}"


SELFTEST_CHECKS = [
    ("pole_residuals", _check_pole_residuals),
    ("threshold_exactness", _check_threshold_exactness),
    ("jacobian_check", _check_jacobian),
    ("decoupling_limit", _check_decoupling),
]


def cmd_selftest(args) -> int:
    t0 = time.time()
    for name, check in SELFTEST_CHECKS:
        try:
            check()
        except AssertionError as exc:
            print(f"FAIL {name}: {exc}")
            return EXIT_SELFTEST
        print(f"ok   {name}")
    print(f"selftest passed in {time.time() - t0:.1f} s")
    return EXIT_OK


_COMMANDS = {
    "derive": cmd_derive,
    "shell": cmd_shell,
    "rate": cmd_rate,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "platforms": cmd_platforms,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except PhaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHASE
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ArithmeticError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":   # pragma: no cover
    sys.exit(main())
