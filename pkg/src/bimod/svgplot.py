"""Static SVG renderers for the command-line artifacts.

Two tiny hand-rolled plots, a scatter and a colored adjacency matrix, kept
dependency-free on purpose: the CLI promises byte-identical output for a
fixed seed, and a plotting library's output is not stable enough across
versions to promise that.  All coordinates are written with fixed precision.
"""

from __future__ import annotations

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1170aa", "#fc7d0b",
)

_FONT = 'font-family="Helvetica,Arial,sans-serif"'


def color_for(index):
    return PALETTE[index % len(PALETTE)]


def _fmt(x):
    return f"{x:.2f}"


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def scatter_svg(x, y, colors=None, title="", x_label="", y_label="",
                width=640, height=480):
    """Scatter plot as an SVG string.

    colors is an optional per-point list of CSS colors; points default to
    the first palette entry.
    """
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    if len(x) != len(y):
        raise ValueError("x and y must have equal length")
    ml, mr, mt, mb = 64, 16, 34, 46
    pw, ph = width - ml - mr, height - mt - mb
    if x:
        xlo, xhi = min(x), max(x)
        ylo, yhi = min(y), max(y)
    else:
        xlo = xhi = ylo = yhi = 0.0
    xpad = (xhi - xlo) * 0.05 or 0.5
    ypad = (yhi - ylo) * 0.05 or 0.5
    xlo, xhi = xlo - xpad, xhi + xpad
    ylo, yhi = ylo - ypad, yhi + ypad

    def sx(v):
        return ml + (v - xlo) / (xhi - xlo) * pw

    def sy(v):
        return mt + ph - (v - ylo) / (yhi - ylo) * ph

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        parts.append(f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" '
                     f'{_FONT} font-size="14">{title}</text>')
    parts.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" '
                 'fill="none" stroke="#333333" stroke-width="1"/>')
    for t in _ticks(xlo, xhi):
        px = sx(t)
        parts.append(f'<line x1="{_fmt(px)}" y1="{mt + ph}" x2="{_fmt(px)}" '
                     f'y2="{mt + ph + 4}" stroke="#333333"/>')
        parts.append(f'<text x="{_fmt(px)}" y="{mt + ph + 17}" text-anchor="middle" '
                     f'{_FONT} font-size="10">{t:.3g}</text>')
    for t in _ticks(ylo, yhi):
        py = sy(t)
        parts.append(f'<line x1="{ml - 4}" y1="{_fmt(py)}" x2="{ml}" '
                     f'y2="{_fmt(py)}" stroke="#333333"/>')
        parts.append(f'<text x="{ml - 7}" y="{_fmt(py + 3)}" text-anchor="end" '
                     f'{_FONT} font-size="10">{t:.3g}</text>')
    if x_label:
        parts.append(f'<text x="{ml + pw / 2:.0f}" y="{height - 10}" '
                     f'text-anchor="middle" {_FONT} font-size="12">{x_label}</text>')
    if y_label:
        cx, cy = 16, mt + ph / 2
        parts.append(f'<text x="{cx}" y="{cy:.0f}" text-anchor="middle" {_FONT} '
                     f'font-size="12" transform="rotate(-90 {cx} {cy:.0f})">'
                     f'{y_label}</text>')
    for i in range(len(x)):
        c = colors[i] if colors is not None else PALETTE[0]
        parts.append(f'<circle cx="{_fmt(sx(x[i]))}" cy="{_fmt(sy(y[i]))}" '
                     f'r="3" fill="{c}" fill-opacity="0.75"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def matrix_svg(n, cells, title="", size=640):
    """Colored n x n matrix of (row, col, color) cells as an SVG string.

    Rows run top to bottom; a light background marks absent entries.  Cell
    size shrinks with n so the figure stays ``size`` pixels wide.
    """
    mt = 34 if title else 8
    margin = 8
    cell = max((size - 2 * margin) / max(n, 1), 0.5)
    grid = cell * n
    width = int(2 * margin + grid)
    height = int(mt + grid + margin)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        parts.append(f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" '
                     f'{_FONT} font-size="14">{title}</text>')
    parts.append(f'<rect x="{margin}" y="{mt}" width="{_fmt(grid)}" '
                 f'height="{_fmt(grid)}" fill="#f4f4f4" stroke="#333333" '
                 'stroke-width="1"/>')
    side = _fmt(max(cell, 0.5))
    for i, j, color in cells:
        px = margin + j * cell
        py = mt + i * cell
        parts.append(f'<rect x="{_fmt(px)}" y="{_fmt(py)}" width="{side}" '
                     f'height="{side}" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
