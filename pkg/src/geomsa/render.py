"""Deterministic SVG output for complexes, reflections and barcodes.

Everything is written with fixed number formatting and no timestamps, so
identical inputs give byte-identical files.
"""
from __future__ import annotations

import math
from typing import Iterable

from .geometry import BBox, PolygonSet
from .persistence import Barcode

SIZE = 800
MARGIN = 40
PLOT = SIZE - 2 * MARGIN

COMPLEX_FILL = "#4c72b0"
REFLECTION_FILL = "#dd8452"
SYMDIFF_STROKE = "#c44e52"
H0_COLOR = "#000000"
H1_COLOR = "#d62728"


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Frame:
    """Maps a data box onto the plot area, y pointing up."""

    def __init__(self, box: BBox):
        self.box = box
        self.sx = PLOT / (box.width or 1.0)
        self.sy = PLOT / (box.height or 1.0)

    def __call__(self, x: float, y: float) -> tuple[str, str]:
        px = MARGIN + (x - self.box.x_min) * self.sx
        py = MARGIN + PLOT - (y - self.box.y_min) * self.sy
        return _fmt(px), _fmt(py)


def _path_data(s: PolygonSet, frame: _Frame) -> str:
    parts = []
    for outer, holes in s.polygons:
        for ring in (outer, *holes):
            pts = [frame(float(x), float(y)) for x, y in ring[:-1]]
            if not pts:
                continue
            head, *tail = pts
            seg = f"M{head[0]} {head[1]}" + "".join(f"L{x} {y}" for x, y in tail) + "Z"
            parts.append(seg)
    return "".join(parts)


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{_escape(title)}</title>",
        '<defs><pattern id="hatch" patternUnits="userSpaceOnUse" width="8" height="8" '
        'patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" '
        f'stroke="{SYMDIFF_STROKE}" stroke-width="2"/></pattern></defs>',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
    ]


def _axes(frame: _Frame, xlabel: str, ylabel: str) -> list[str]:
    b = frame.box
    x0, y0 = MARGIN, MARGIN + PLOT
    out = [
        f'<g id="axes" stroke="#000000" stroke-width="1" fill="none">'
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + PLOT}" y2="{y0}"/>'
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN}"/></g>',
        '<g font-family="sans-serif" font-size="12" fill="#000000">',
    ]
    for k in range(5):
        t = k / 4
        px = _fmt(x0 + t * PLOT)
        py = _fmt(y0 - t * PLOT)
        out.append(f'<text x="{px}" y="{y0 + 16}" text-anchor="middle">{_fmt(b.x_min + t * b.width)}</text>')
        out.append(f'<text x="{x0 - 6}" y="{py}" text-anchor="end">{_fmt(b.y_min + t * b.height)}</text>')
    out.append(f'<text x="{x0 + PLOT // 2}" y="{SIZE - 6}" text-anchor="middle">{_escape(xlabel)}</text>')
    out.append(f'<text x="12" y="{MARGIN - 12}">{_escape(ylabel)}</text>')
    out.append("</g>")
    return out


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(
    title: str,
    layers: Iterable[tuple[str, PolygonSet]],
    box: BBox = BBox(0.0, 1.0, 0.0, 1.0),
    *,
    mid_line: float | None = None,
    xlabel: str = "x",
    ylabel: str = "y",
) -> str:
    """Render named polygon layers.

    Layer kinds: ``complex`` (solid fill), ``reflection`` (second fill,
    translucent) and ``symdiff`` (hatched).
    """
    frame = _Frame(box)
    out = _header(title)
    styles = {
        "complex": f'fill="{COMPLEX_FILL}" fill-opacity="0.6" stroke="{COMPLEX_FILL}" stroke-width="0.5"',
        "reflection": f'fill="{REFLECTION_FILL}" fill-opacity="0.45" stroke="{REFLECTION_FILL}" stroke-width="0.5"',
        "symdiff": f'fill="url(#hatch)" stroke="{SYMDIFF_STROKE}" stroke-width="0.75"',
    }
    for kind, ps in layers:
        d = _path_data(ps, frame)
        if d:
            out.append(f'<path id="{kind}" fill-rule="evenodd" {styles[kind]} d="{d}"/>')
    if mid_line is not None:
        _, py = frame(box.x_min, mid_line)
        out.append(
            f'<line id="midline" x1="{MARGIN}" y1="{py}" x2="{MARGIN + PLOT}" y2="{py}" '
            'stroke="#555555" stroke-dasharray="6 4"/>'
        )
    out += _axes(frame, xlabel, ylabel)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_barcode_svg(b: Barcode, title: str, epsilon_max: float | None = None) -> str:
    """Horizontal bars, H0 in black below H1 in red; infinite bars run to the right edge."""
    bars = [iv for iv in b.intervals if not iv.zero_length]
    finite = [iv.death for iv in bars if math.isfinite(iv.death)] + [iv.birth for iv in bars]
    right = epsilon_max if epsilon_max else (max(finite) * 1.05 if finite else 1.0)
    right = right or 1.0
    bars.sort(key=lambda iv: (-iv.dim, iv.birth, iv.death))
    out = _header(title)
    step = PLOT / max(len(bars), 1)
    width = max(min(step * 0.7, 6.0), 0.5)
    out.append('<g id="bars">')
    for r, iv in enumerate(bars):
        y = MARGIN + (r + 0.5) * step
        x1 = MARGIN + min(iv.birth / right, 1.0) * PLOT
        end = iv.death if math.isfinite(iv.death) else right
        x2 = MARGIN + min(end / right, 1.0) * PLOT
        color = H0_COLOR if iv.dim == 0 else H1_COLOR
        out.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y)}" x2="{_fmt(x2)}" y2="{_fmt(y)}" '
            f'stroke="{color}" stroke-width="{_fmt(width)}"/>'
        )
    out.append("</g>")
    y0 = MARGIN + PLOT
    out.append(
        f'<line x1="{MARGIN}" y1="{y0}" x2="{MARGIN + PLOT}" y2="{y0}" stroke="#000000" stroke-width="1"/>'
    )
    out.append('<g font-family="sans-serif" font-size="12" fill="#000000">')
    for k in range(5):
        t = k / 4
        out.append(f'<text x="{_fmt(MARGIN + t * PLOT)}" y="{y0 + 16}" text-anchor="middle">{_fmt(t * right)}</text>')
    out.append(f'<text x="{MARGIN + PLOT // 2}" y="{SIZE - 6}" text-anchor="middle">epsilon</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
