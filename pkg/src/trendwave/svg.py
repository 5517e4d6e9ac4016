"""Minimal SVG writers for scalogram heatmaps and line charts.

Output depends only on the data (fixed precision, no timestamps), so
identical inputs give identical files.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 480
MARGIN = dict(left=70, right=20, top=40, bottom=50)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
MAX_CELLS = (150, 300)  # rows, cols rendered


def _f(v: float) -> str:
    return f"{v:.2f}"


def _diverging(v: float) -> str:
    """Blue for negative, white at zero, red for positive; ``v`` in [-1, 1]."""
    v = max(-1.0, min(1.0, v))
    if v >= 0:
        r, g, b = 255, int(round(255 * (1 - v))), int(round(255 * (1 - v)))
    else:
        r, g, b = int(round(255 * (1 + v))), int(round(255 * (1 + v))), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def _frame(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]


def _axes(x0, x1, y0, y1, xlabel, ylabel, ylog=False) -> list[str]:
    L, R, T, B = MARGIN["left"], WIDTH - MARGIN["right"], MARGIN["top"], HEIGHT - MARGIN["bottom"]
    out = [f'<rect x="{L}" y="{T}" width="{R - L}" height="{B - T}" fill="none" stroke="black"/>']
    for frac in np.linspace(0, 1, 6):
        xv = x0 + frac * (x1 - x0)
        px = L + frac * (R - L)
        out.append(f'<text x="{_f(px)}" y="{B + 16}" text-anchor="middle">{xv:.4g}</text>')
        yv = y0 * (y1 / y0) ** frac if ylog else y0 + frac * (y1 - y0)
        py = B - frac * (B - T)
        out.append(f'<text x="{L - 6}" y="{_f(py + 4)}" text-anchor="end">{yv:.4g}</text>')
    out.append(f'<text x="{(L + R) / 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{(T + B) / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {(T + B) / 2})">{escape(ylabel)}</text>')
    return out


def heatmap_svg(scales, shifts, values, markers=(), title="Scalogram") -> str:
    """Colored-rect heatmap with shift on x and scale on y (log axis).

    ``markers`` is an iterable of (alpha, beta, kind) drawn as circles
    (filled for maxima, hollow for minima).
    """
    scales = np.asarray(scales, float)
    shifts = np.asarray(shifts, float)
    values = np.asarray(values, float)
    rs = max(1, int(np.ceil(scales.size / MAX_CELLS[0])))
    cs = max(1, int(np.ceil(shifts.size / MAX_CELLS[1])))
    sub = values[::rs, ::cs]
    top = float(np.abs(values).max()) or 1.0
    L, R, T, B = MARGIN["left"], WIDTH - MARGIN["right"], MARGIN["top"], HEIGHT - MARGIN["bottom"]
    nr, nc = sub.shape
    cw, ch = (R - L) / nc, (B - T) / nr
    out = _frame(title)
    for i in range(nr):
        y = B - (i + 1) * ch
        for j in range(nc):
            out.append(f'<rect x="{_f(L + j * cw)}" y="{_f(y)}" width="{_f(cw + 0.05)}" '
                       f'height="{_f(ch + 0.05)}" fill="{_diverging(sub[i, j] / top)}"/>')
    lo, hi = scales[0], scales[-1]
    ylog = scales.size > 2 and lo > 0 and not np.allclose(np.diff(scales), scales[1] - scales[0])

    def ypix(a):
        frac = (np.log(a / lo) / np.log(hi / lo)) if ylog else (a - lo) / (hi - lo or 1.0)
        return B - frac * (B - T)

    def xpix(b):
        return L + (b - shifts[0]) / ((shifts[-1] - shifts[0]) or 1.0) * (R - L)

    for alpha, beta, kind in markers:
        fill = "black" if kind == "max" else "none"
        out.append(f'<circle cx="{_f(xpix(beta))}" cy="{_f(ypix(alpha))}" r="4" '
                   f'fill="{fill}" stroke="black"/>')
    out += _axes(shifts[0], shifts[-1], lo, hi, "shift (week)", "scale (weeks)", ylog)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def line_chart_svg(curves, title="", xlabel="", ylabel="") -> str:
    """Polylines for ``curves``: iterable of (x, y, label)."""
    curves = [(np.asarray(x, float), np.asarray(y, float), label) for x, y, label in curves]
    xs = np.concatenate([c[0] for c in curves])
    ys = np.concatenate([c[1] for c in curves])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    L, R, T, B = MARGIN["left"], WIDTH - MARGIN["right"], MARGIN["top"], HEIGHT - MARGIN["bottom"]
    out = _frame(title)
    for n, (x, y, label) in enumerate(curves):
        px = L + (x - x0) / (x1 - x0) * (R - L)
        py = B - (y - y0) / (y1 - y0) * (B - T)
        pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in zip(px, py))
        color = PALETTE[n % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{R - 8}" y="{T + 16 + 16 * n}" text-anchor="end" '
                   f'fill="{color}">{escape(label)}</text>')
    out += _axes(x0, x1, y0, y1, xlabel, ylabel)
    out.append("</svg>")
    return "\n".join(out) + "\n"
