"""Minimal hand-written SVG line charts (axes, ticks, polylines, markers).

No plotting library is involved, so the bytes depend only on the data and
the fixed number formatting below.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    k = 0
    while first + k * step <= hi + 1e-9 * step:
        out.append(first + k * step)
        k += 1
    return out


def _label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:.4g}"


def line_chart(
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    markers=(),
    width: int = 640,
    height: int = 400,
    logx: bool = False,
    logy: bool = False,
) -> str:
    """Render ``series`` = [(label, xs, ys), ...] as an SVG 1.1 document.

    ``markers`` are x positions drawn as dashed vertical lines.  Non-finite
    points (and nonpositive ones on a log axis) are skipped.
    """
    tx = math.log10 if logx else float
    ty = math.log10 if logy else float
    clean = []
    for label, xs, ys in series:
        pts = []
        for x, y in zip(xs, ys):
            x, y = float(x), float(y)
            if not (math.isfinite(x) and math.isfinite(y)):
                continue
            if (logx and x <= 0) or (logy and y <= 0):
                continue
            pts.append((tx(x), ty(y)))
        clean.append((label, pts))
    allp = [p for _, pts in clean for p in pts]
    if not allp:
        allp = [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(p[0] for p in allp), max(p[0] for p in allp)
    y0, y1 = min(p[1] for p in allp), max(p[1] for p in allp)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    left, right, top, bottom = 64, 16, 32, 48
    pw, ph = width - left - right, height - top - bottom

    def X(v):
        return left + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.2f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>')
    out.append(
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>'
    )
    for v in _ticks(x0, x1):
        px = X(v)
        lab = _label(10**v if logx else v)
        out.append(f'<line x1="{_fmt(px)}" y1="{top + ph}" x2="{_fmt(px)}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{_fmt(px)}" y="{top + ph + 16}" text-anchor="middle">{lab}</text>')
    for v in _ticks(y0, y1):
        py = Y(v)
        lab = _label(10**v if logy else v)
        out.append(f'<line x1="{left - 4}" y1="{_fmt(py)}" x2="{left}" y2="{_fmt(py)}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{_fmt(py + 4)}" text-anchor="end">{lab}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        cy = top + ph / 2
        out.append(
            f'<text x="14" y="{cy:.2f}" text-anchor="middle" transform="rotate(-90 14 {cy:.2f})">{escape(ylabel)}</text>'
        )
    for m in markers:
        m = tx(float(m))
        if x0 <= m <= x1:
            px = _fmt(X(m))
            out.append(
                f'<line x1="{px}" y1="{top}" x2="{px}" y2="{top + ph}" stroke="gray" stroke-dasharray="4,3"/>'
            )
    for i, (label, pts) in enumerate(clean):
        color = PALETTE[i % len(PALETTE)]
        if pts:
            coords = " ".join(f"{_fmt(X(x))},{_fmt(Y(y))}" for x, y in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = top + 14 + 14 * i
        out.append(f'<line x1="{left + 8}" y1="{ly - 4}" x2="{left + 28}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + 32}" y="{ly}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
