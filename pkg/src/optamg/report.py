"""SVG figures: sparsity pattern of an operator and rates versus coarse size.

Plain SVG 1.1 is emitted by hand; there is no plotting dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import os
from xml.sax.saxutils import escape, quoteattr

import numpy as np
import scipy.sparse as sp

from .blocksys import BlockSystem

__all__ = ["PlotSpec", "Series", "spy_svg", "rates_svg", "line_plot_svg", "nice_ticks"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


@dataclass
class Series:
    name: str
    points: list
    marker: str = "circle"  # circle | square | triangle | cross | none
    line: str = "solid"  # solid | dashed | none


@dataclass
class PlotSpec:
    title: str
    x_label: str
    y_label: str
    series: list = field(default_factory=list)

    def validate(self) -> None:
        if not self.series:
            raise ValueError("plot has no series")
        for s in self.series:
            if not s.points:
                raise ValueError(f"series {s.name!r} is empty")
            if not all(math.isfinite(x) and math.isfinite(y) for x, y in s.points):
                raise ValueError(f"series {s.name!r} has non-finite coordinates")


def _write(path, parts) -> None:
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")


def _header(w, h):
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]


def _n(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def spy_svg(m, out_path, size: int = 600, block_k: int | None = None, title: str | None = None) -> int:
    """Draw one square per stored nonzero of ``m``.

    For a :class:`BlockSystem` (or when ``block_k`` is given) the 2x2 block
    boundaries are drawn. Returns the number of marks written.
    """
    if isinstance(m, BlockSystem):
        block_k = m.k if block_k is None else block_k
        m = m.block
    a = sp.coo_matrix(m)
    a.sum_duplicates()
    a.eliminate_zeros()
    nr, nc = a.shape
    margin, top = 50, 40 if title else 20
    w, h = size + margin + 20, size + top + margin
    cell = size / max(nr, nc, 1)
    parts = _header(w, h)
    if title:
        parts.append(f'<text x="{w / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(title)}</text>')
    x0, y0 = margin, top
    pw, ph = cell * nc, cell * nr
    parts.append(f'<rect x="{x0}" y="{y0}" width="{_n(pw)}" height="{_n(ph)}" fill="none" stroke="black" stroke-width="1"/>')
    parts.append('<g fill="#1f3b73" class="marks">')
    order = np.lexsort((a.col, a.row))
    for i, j in zip(a.row[order], a.col[order]):
        parts.append(f'<rect x="{_n(x0 + j * cell)}" y="{_n(y0 + i * cell)}" width="{_n(max(cell, 0.5))}" height="{_n(max(cell, 0.5))}"/>')
    parts.append("</g>")
    if block_k:
        xb, yb = x0 + block_k * cell, y0 + block_k * cell
        parts.append(
            f'<g stroke="#d62728" stroke-width="1" stroke-dasharray="4,3" class="blocks">'
            f'<line x1="{_n(xb)}" y1="{y0}" x2="{_n(xb)}" y2="{_n(y0 + ph)}"/>'
            f'<line x1="{x0}" y1="{_n(yb)}" x2="{_n(x0 + pw)}" y2="{_n(yb)}"/></g>'
        )
    parts.append(f'<text x="{_n(x0 + pw / 2)}" y="{_n(y0 + ph + 30)}" text-anchor="middle" font-family="sans-serif" font-size="12">column (n = {nc})</text>')
    parts.append(
        f'<text x="18" y="{_n(y0 + ph / 2)}" text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {_n(y0 + ph / 2)})">row (n = {nr})</text>'
    )
    parts.append(f'<text x="{_n(x0 + pw)}" y="{_n(y0 + ph + 30)}" text-anchor="end" font-family="sans-serif" font-size="11">nnz = {a.nnz}</text>')
    parts.append("</svg>")
    _write(out_path, parts)
    return int(a.nnz)


def nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    """Round tick positions covering ``[lo, hi]``."""
    if hi - lo <= 1e-9 * max(1.0, abs(lo), abs(hi)):
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=10 * mag)
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    if ticks[-1] < hi:
        ticks.append(round(t, 12))
    return ticks


def _marker(kind, x, y, color):
    if kind == "square":
        return f'<rect x="{_n(x - 3.5)}" y="{_n(y - 3.5)}" width="7" height="7" fill="{color}"/>'
    if kind == "triangle":
        return f'<polygon points="{_n(x)},{_n(y - 4.5)} {_n(x - 4)},{_n(y + 3.5)} {_n(x + 4)},{_n(y + 3.5)}" fill="none" stroke="{color}" stroke-width="1.5"/>'
    if kind == "cross":
        return (
            f'<path d="M{_n(x - 3.5)},{_n(y - 3.5)} L{_n(x + 3.5)},{_n(y + 3.5)} M{_n(x - 3.5)},{_n(y + 3.5)} '
            f'L{_n(x + 3.5)},{_n(y - 3.5)}" stroke="{color}" stroke-width="1.5"/>'
        )
    if kind == "circle":
        return f'<circle cx="{_n(x)}" cy="{_n(y)}" r="3.5" fill="none" stroke="{color}" stroke-width="1.5"/>'
    return ""


def line_plot_svg(spec: PlotSpec, out_path, width: int = 720, height: int = 480) -> None:
    """Linear-axis line/marker chart with a legend."""
    spec.validate()
    xs = [x for s in spec.series for x, _ in s.points]
    ys = [y for s in spec.series for _, y in s.points]
    xt = nice_ticks(min(xs), max(xs))
    yt = nice_ticks(min(0.0, min(ys)), max(ys))
    left, right, top, bottom = 70, 180, 40, 55
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - xt[0]) / (xt[-1] - xt[0]) * pw

    def py(y):
        return top + ph - (y - yt[0]) / (yt[-1] - yt[0]) * ph

    parts = _header(width, height)
    parts.append(f'<text x="{left + pw / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(spec.title)}</text>')
    parts.append('<g stroke="#dddddd" stroke-width="1">')
    for t in xt:
        parts.append(f'<line x1="{_n(px(t))}" y1="{top}" x2="{_n(px(t))}" y2="{top + ph}"/>')
    for t in yt:
        parts.append(f'<line x1="{left}" y1="{_n(py(t))}" x2="{left + pw}" y2="{_n(py(t))}"/>')
    parts.append("</g>")
    parts.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    parts.append('<g font-family="sans-serif" font-size="11">')
    for t in xt:
        parts.append(f'<text x="{_n(px(t))}" y="{top + ph + 16}" text-anchor="middle">{t:g}</text>')
    for t in yt:
        parts.append(f'<text x="{left - 6}" y="{_n(py(t) + 4)}" text-anchor="end">{t:g}</text>')
    parts.append("</g>")
    parts.append(f'<text x="{left + pw / 2:.1f}" y="{height - 14}" text-anchor="middle" font-family="sans-serif" font-size="13">{escape(spec.x_label)}</text>')
    parts.append(
        f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {top + ph / 2:.1f})">{escape(spec.y_label)}</text>'
    )
    for k, s in enumerate(spec.series):
        color = _COLORS[k % len(_COLORS)]
        pts = sorted(s.points)
        parts.append(f'<g class="series" data-name={quoteattr(s.name)}>')
        if s.line != "none" and len(pts) > 1:
            dash = ' stroke-dasharray="6,4"' if s.line == "dashed" else ""
            coords = " ".join(f"{_n(px(x))},{_n(py(y))}" for x, y in pts)
            parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
        for x, y in pts:
            parts.append(_marker(s.marker, px(x), py(y), color))
        parts.append("</g>")
        ly = top + 14 + 20 * k
        lx = left + pw + 14
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>')
        parts.append(_marker(s.marker, lx + 12, ly, color))
        parts.append(f'<text x="{lx + 30}" y="{ly + 4}" font-family="sans-serif" font-size="12">{escape(s.name)}</text>')
    parts.append("</svg>")
    _write(out_path, parts)


def rates_svg(records, out_path, title: str = "Two-grid rates with optimal interpolation") -> None:
    """Plot theory, exact, and power-method rates against ``n_c``."""
    records = list(records)
    if not records:
        raise ValueError("no records to plot")
    series = [
        Series("1 - lambda_{nc+1}", [(r.n_c, r.theory_rate) for r in records], marker="circle", line="solid"),
        Series("rho(E_TG) exact", [(r.n_c, r.rho_exact) for r in records], marker="square", line="none"),
        Series("error reduction", [(r.n_c, r.err_rate) for r in records], marker="triangle", line="none"),
        Series("residual reduction", [(r.n_c, r.res_rate) for r in records], marker="cross", line="dashed"),
    ]
    line_plot_svg(PlotSpec(title=title, x_label="number of coarse points n_c", y_label="convergence rate", series=series), out_path)
