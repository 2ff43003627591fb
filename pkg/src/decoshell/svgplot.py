"""Minimal self-contained SVG rendering: polyline charts and cell heatmaps.

No external tooling; CSV stays the authoritative output and these renderings
are quick-look companions.
"""

from __future__ import annotations

import math
from pathlib import Path

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 30, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f")


def _finite(vals):
    return [v for v in vals if v is not None and math.isfinite(v)]


def _scale(lo, hi):
    if hi <= lo:
        hi = lo + 1.0
    return lo, hi


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def line_chart(path: str | Path, xs, series: dict[str, list[float]],
               title: str = "", xlabel: str = "", ylabel: str = "",
               logy: bool = False) -> None:
    """Write a polyline chart; ``series`` maps label -> y values over xs."""
    xs = list(xs)
    ys_all = _finite([y for ys in series.values() for y in ys])
    if logy:
        ys_all = [math.log10(y) for y in ys_all if y > 0]
    xlo, xhi = _scale(min(xs), max(xs))
    ylo, yhi = _scale(min(ys_all, default=0.0), max(ys_all, default=1.0))
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(x):
        return _ML + (x - xlo) / (xhi - xlo) * pw

    def py(y):
        return _MT + ph - (y - ylo) / (yhi - ylo) * ph

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
             f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
             f'<rect width="{_W}" height="{_H}" fill="white"/>',
             f'<text x="{_W / 2}" y="18" text-anchor="middle">{title}</text>']
    # axes
    parts.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_MT + ph}" stroke="black"/>')
    parts.append(f'<line x1="{_ML}" y1="{_MT + ph}" x2="{_ML + pw}" y2="{_MT + ph}" stroke="black"/>')
    for i in range(5):
        xt = xlo + i * (xhi - xlo) / 4
        yt = ylo + i * (yhi - ylo) / 4
        parts.append(f'<line x1="{px(xt)}" y1="{_MT + ph}" x2="{px(xt)}" '
                     f'y2="{_MT + ph + 4}" stroke="black"/>')
        parts.append(f'<text x="{px(xt)}" y="{_MT + ph + 18}" '
                     f'text-anchor="middle">{_fmt(xt)}</text>')
        label = f"1e{yt:.1f}" if logy else _fmt(yt)
        parts.append(f'<text x="{_ML - 6}" y="{py(yt) + 4}" '
                     f'text-anchor="end">{label}</text>')
    parts.append(f'<text x="{_ML + pw / 2}" y="{_H - 12}" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {_MT + ph / 2})">{ylabel}</text>')
    for idx, (label, ys) in enumerate(series.items()):
        color = _COLORS[idx % len(_COLORS)]
        pts = []
        for x, y in zip(xs, ys):
            if y is None or not math.isfinite(y):
                continue
            if logy:
                if y <= 0:
                    continue
                y = math.log10(y)
            pts.append(f"{px(x):.2f},{py(y):.2f}")
        if pts:
            parts.append(f'<polyline fill="none" stroke="{color}" '
                         f'stroke-width="1.5" points="{" ".join(pts)}"/>')
        ly = _MT + 14 + 16 * idx
        parts.append(f'<line x1="{_ML + pw - 120}" y1="{ly - 4}" '
                     f'x2="{_ML + pw - 100}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{_ML + pw - 95}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))


def _colormap(t: float) -> str:
    """Linear dark-blue -> yellow map on [0, 1]."""
    t = min(1.0, max(0.0, t))
    r = int(255 * t)
    g = int(40 + 180 * t)
    b = int(120 * (1.0 - t) + 40)
    return f"rgb({r},{g},{b})"


def heatmap(path: str | Path, xs, ys, z, title: str = "",
            xlabel: str = "", ylabel: str = "") -> None:
    """Write a cell heatmap; z[j][i] is the value at (xs[i], ys[j])."""
    xs, ys = list(xs), list(ys)
    flat = _finite([v for row in z for v in row])
    zlo = min(flat, default=0.0)
    zhi = max(flat, default=1.0)
    span = (zhi - zlo) or 1.0
    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    cw, ch = pw / len(xs), ph / len(ys)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
             f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
             f'<rect width="{_W}" height="{_H}" fill="white"/>',
             f'<text x="{_W / 2}" y="18" text-anchor="middle">{title}</text>']
    for j, _ in enumerate(ys):
        for i, _ in enumerate(xs):
            v = z[j][i]
            t = 0.0 if not math.isfinite(v) else (v - zlo) / span
            x0 = _ML + i * cw
            y0 = _MT + ph - (j + 1) * ch
            parts.append(f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{cw + 0.5:.2f}" '
                         f'height="{ch + 0.5:.2f}" fill="{_colormap(t)}"/>')
    parts.append(f'<text x="{_ML}" y="{_MT + ph + 18}">{_fmt(xs[0])}</text>')
    parts.append(f'<text x="{_ML + pw}" y="{_MT + ph + 18}" '
                 f'text-anchor="end">{_fmt(xs[-1])}</text>')
    parts.append(f'<text x="{_ML - 6}" y="{_MT + ph}" text-anchor="end">{_fmt(ys[0])}</text>')
    parts.append(f'<text x="{_ML - 6}" y="{_MT + 10}" text-anchor="end">{_fmt(ys[-1])}</text>')
    parts.append(f'<text x="{_ML + pw / 2}" y="{_H - 12}" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {_MT + ph / 2})">{ylabel}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))
