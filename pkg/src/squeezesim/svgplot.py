"""Dependency-free SVG rendering of sweep results.

One figure: the CHSH statistic S (black dots, left axis, range [0, 4]) and
the coincident detection efficiency (blue squares, right axis, range [0, 1])
versus the squeezing strength, with horizontal reference lines at the
classical bound 2 and at 2*sqrt(2).  Rows whose statistics are undefined are
skipped and leave a gap in the polylines.
"""

from __future__ import annotations

import math
from pathlib import Path

WIDTH = 720
HEIGHT = 460
MARGIN_LEFT = 64
MARGIN_RIGHT = 64
MARGIN_TOP = 28
MARGIN_BOTTOM = 52

S_AXIS_MAX = 4.0
ETA_AXIS_MAX = 1.0

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)


def x_pixel(r: float, r_min: float, r_max: float) -> float:
    span = (r_max - r_min) or 1.0
    return MARGIN_LEFT + (r - r_min) / span * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)


def y_pixel_s(s: float) -> float:
    return HEIGHT - MARGIN_BOTTOM - s / S_AXIS_MAX * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)


def y_pixel_eta(eta: float) -> float:
    return HEIGHT - MARGIN_BOTTOM - eta / ETA_AXIS_MAX * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)


def _segments(points):
    """Split (x, y or None) pairs into polyline segments at the gaps."""
    runs, current = [], []
    for x, y in points:
        if y is None:
            if len(current) > 1:
                runs.append(current)
            current = []
        else:
            current.append((x, y))
    if len(current) > 1:
        runs.append(current)
    return runs


def _polyline(points, style: str) -> str:
    coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
    return f'<polyline fill="none" {style} points="{coords}"/>'


def emit_svg(rows, path) -> None:
    """Write the sweep figure; needs at least two rows with defined S."""
    valid = [row for row in rows if row.s is not None]
    if len(valid) < 2:
        raise ValueError("need at least two valid rows to plot")
    r_min = min(row.r for row in rows)
    r_max = max(row.r for row in rows)

    s_points = [(x_pixel(row.r, r_min, r_max),
                 None if row.s is None else y_pixel_s(row.s)) for row in rows]
    eta_points = [(x_pixel(row.r, r_min, r_max),
                   None if row.eta is None else y_pixel_eta(row.eta)) for row in rows]

    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        # axes
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black" stroke-width="1"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black" stroke-width="1"/>',
        f'<line x1="{x1}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="blue" stroke-width="1"/>',
    ]

    # reference lines in plot coordinates
    y_classical = y_pixel_s(CLASSICAL_BOUND)
    y_tsirelson = y_pixel_s(TSIRELSON_BOUND)
    parts.append(f'<line id="ref-classical" x1="{x0}" y1="{y_classical:.2f}" '
                 f'x2="{x1}" y2="{y_classical:.2f}" stroke="red" stroke-width="1"/>')
    parts.append(f'<line id="ref-tsirelson" x1="{x0}" y1="{y_tsirelson:.2f}" '
                 f'x2="{x1}" y2="{y_tsirelson:.2f}" stroke="green" stroke-width="1" '
                 f'stroke-dasharray="6,4"/>')

    # left axis ticks (S) and right axis ticks (eta)
    for k in range(5):
        y = y_pixel_s(k)
        parts.append(f'<line x1="{x0 - 4}" y1="{y:.2f}" x2="{x0}" y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8}" y="{y + 4:.2f}" font-size="12" '
                     f'text-anchor="end">{k}</text>')
    for k in range(5):
        eta = k / 4.0
        y = y_pixel_eta(eta)
        parts.append(f'<line x1="{x1}" y1="{y:.2f}" x2="{x1 + 4}" y2="{y:.2f}" stroke="blue"/>')
        parts.append(f'<text x="{x1 + 8}" y="{y + 4:.2f}" font-size="12" fill="blue" '
                     f'text-anchor="start">{eta:g}</text>')
    n_xticks = 6
    for k in range(n_xticks + 1):
        r = r_min + (r_max - r_min) * k / n_xticks
        x = x_pixel(r, r_min, r_max)
        parts.append(f'<line x1="{x:.2f}" y1="{y0}" x2="{x:.2f}" y2="{y0 + 4}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{y0 + 18}" font-size="12" '
                     f'text-anchor="middle">{r:.2g}</text>')

    # series
    parts.append('<g id="series-s">')
    for seg in _segments(s_points):
        parts.append(_polyline(seg, 'stroke="black" stroke-width="1"'))
    for (x, y) in s_points:
        if y is not None:
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="black"/>')
    parts.append("</g>")

    parts.append('<g id="series-eta">')
    for seg in _segments(eta_points):
        parts.append(_polyline(seg, 'stroke="blue" stroke-width="1"'))
    for (x, y) in eta_points:
        if y is not None:
            parts.append(f'<rect x="{x - 3:.2f}" y="{y - 3:.2f}" width="6" height="6" fill="blue"/>')
    parts.append("</g>")

    # labels
    parts.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{HEIGHT - 12}" font-size="14" '
                 f'text-anchor="middle">squeezing parameter r</text>')
    parts.append(f'<text x="16" y="{(y0 + y1) / 2:.2f}" font-size="14" text-anchor="middle" '
                 f'transform="rotate(-90 16 {(y0 + y1) / 2:.2f})">Bell statistic S</text>')
    parts.append(f'<text x="{WIDTH - 14}" y="{(y0 + y1) / 2:.2f}" font-size="14" '
                 f'text-anchor="middle" fill="blue" '
                 f'transform="rotate(90 {WIDTH - 14} {(y0 + y1) / 2:.2f})">'
                 f'coincidence efficiency</text>')
    parts.append("</svg>")

    Path(path).write_text("\n".join(parts) + "\n")
