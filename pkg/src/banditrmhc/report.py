"""Static SVG line charts of aggregated results.

Hand-written SVG keeps the output byte-for-byte reproducible and avoids a
plotting dependency.
"""
from __future__ import annotations

import math
from pathlib import Path

from .fitness import PreconditionError

__all__ = ["MODES", "series_of", "render_svg", "emit_plot_svg"]

MODES = ("evals", "evals_per_dim")
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]

WIDTH, HEIGHT = 720, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 190, 40, 50


def _label(key) -> str:
    algo, r, sigma, block = key
    parts = [algo]
    if block > 1:
        parts.append(f"b={block}")
    if sigma > 0:
        parts.append(f"sigma={sigma:g}")
        parts.append(f"({r})")
    return " ".join(parts)


def series_of(rows):
    """Group rows into ``{(algo, resample, sigma, block): [row, ...]}`` sorted by dim."""
    out = {}
    for row in rows:
        out.setdefault((row.algo, row.resample, row.noise_sigma, row.block_size), []).append(row)
    return {k: sorted(v, key=lambda r: r.dim) for k, v in sorted(out.items())}


def _value(row, mode):
    if mode == "evals":
        return row.mean_evals, row.stderr_evals
    scale = 1.0 / row.dim
    return row.mean_evals * scale, row.stderr_evals * scale


def _nice_ticks(hi: float, count: int = 5):
    if hi <= 0:
        return [0.0]
    raw = hi / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    return [k * step for k in range(int(hi / step) + 1)]


def render_svg(rows, mode: str = "evals") -> str:
    rows = list(rows)
    if not rows:
        raise PreconditionError("no rows to plot")
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}, got {mode!r}")
    problems = {r.problem for r in rows}
    if len(problems) != 1:
        raise PreconditionError(f"rows mix problem kinds: {sorted(problems)}")
    series = series_of(rows)

    points = {}
    for key, srows in series.items():
        pts = []
        for r in srows:
            y, e = _value(r, mode)
            if math.isfinite(y):
                pts.append((r.dim, y, e if math.isfinite(e) else 0.0))
        points[key] = pts
    all_pts = [p for pts in points.values() for p in pts]
    dims = sorted({r.dim for r in rows})
    x_lo, x_hi = dims[0], dims[-1]
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1, x_hi + 1
    y_hi = max((y + e for _, y, e in all_pts), default=1.0) * 1.05 or 1.0

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return TOP + ph - y / y_hi * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{LEFT}" y="{TOP - 15}" font-size="14">{rows[0].problem}: '
        f'{"average #evals" if mode == "evals" else "average #evals/dim"} '
        f'(solved runs only, band = 1 std. error)</text>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for d in dims:
        out.append(f'<text x="{sx(d):.2f}" y="{TOP + ph + 18}" text-anchor="middle">{d}</text>')
    for t in _nice_ticks(y_hi):
        out.append(f'<text x="{LEFT - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle">dimension</text>')

    for k, (key, pts) in enumerate(points.items()):
        color = PALETTE[k % len(PALETTE)]
        if pts:
            upper = [f"{sx(x):.2f},{sy(y + e):.2f}" for x, y, e in pts]
            lower = [f"{sx(x):.2f},{sy(max(y - e, 0.0)):.2f}" for x, y, e in reversed(pts)]
            out.append(f'<polygon points="{" ".join(upper + lower)}" fill="{color}" '
                       f'fill-opacity="0.2" stroke="none"/>')
            line = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y, _ in pts)
            out.append(f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="2"/>')
        ly = TOP + 10 + 18 * k
        out.append(f'<rect x="{LEFT + pw + 15}" y="{ly - 9}" width="12" height="12" fill="{color}"/>')
        out.append(f'<text x="{LEFT + pw + 32}" y="{ly + 1}">{_label(key)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot_svg(rows, mode: str, path) -> None:
    """Write a chart of ``rows`` (aggregate rows of one problem kind) to ``path``."""
    Path(path).write_text(render_svg(rows, mode), encoding="utf-8")
