"""Radial palette glyph: primary color disc at the center, accent sectors
around it with angular spans proportional to accent proportions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gencolor.association import PaletteComposition


@dataclass(frozen=True)
class GlyphConfig:
    size: int = 240
    center_radius_frac: float = 0.45
    annulus_inner_frac: float = 0.55
    annulus_outer_frac: float = 0.95
    start_angle_deg: float = 90.0  # 12 o'clock, sectors proceed clockwise
    background: str = "none"


@dataclass
class GlyphLayout:
    size: int
    center_radius_frac: float
    annulus_inner_frac: float
    annulus_outer_frac: float
    start_angle_deg: float
    spans_deg: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not (0.0 < self.center_radius_frac < 1.0):
            raise ValueError("center radius fraction must lie in (0,1)")
        if not (0.0 < self.annulus_inner_frac < self.annulus_outer_frac < 1.0):
            raise ValueError("annulus fractions must satisfy 0 < inner < outer < 1")
        if self.spans_deg and abs(sum(self.spans_deg) - 360.0) > 1e-6:
            raise ValueError("angular spans must sum to 360")


def layout_glyph(
    palette: PaletteComposition, config: GlyphConfig = GlyphConfig()
) -> GlyphLayout:
    """Map accent proportions to angular spans (descending, clockwise)."""
    proportions = [p for _, p in palette.accents]
    total = sum(proportions)
    spans = [360.0 * p / total for p in proportions]
    if spans:
        # absorb float residue into the largest (first) span
        spans[0] += 360.0 - sum(spans)
    return GlyphLayout(
        size=config.size,
        center_radius_frac=config.center_radius_frac,
        annulus_inner_frac=config.annulus_inner_frac,
        annulus_outer_frac=config.annulus_outer_frac,
        start_angle_deg=config.start_angle_deg,
        spans_deg=spans,
    )


def _point(cx: float, cy: float, radius: float, angle_deg: float) -> tuple[float, float]:
    a = math.radians(angle_deg)
    return cx + radius * math.cos(a), cy - radius * math.sin(a)


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def _sector_path(
    cx: float, cy: float, r_in: float, r_out: float, a0: float, a1: float
) -> str:
    """Annulus sector from math angle a0 clockwise to a1 (a1 < a0)."""
    large = 1 if (a0 - a1) > 180.0 else 0
    x0, y0 = _point(cx, cy, r_out, a0)
    x1, y1 = _point(cx, cy, r_out, a1)
    x2, y2 = _point(cx, cy, r_in, a1)
    x3, y3 = _point(cx, cy, r_in, a0)
    return (
        f"M {_fmt(x0)} {_fmt(y0)} "
        f"A {_fmt(r_out)} {_fmt(r_out)} 0 {large} 1 {_fmt(x1)} {_fmt(y1)} "
        f"L {_fmt(x2)} {_fmt(y2)} "
        f"A {_fmt(r_in)} {_fmt(r_in)} 0 {large} 0 {_fmt(x3)} {_fmt(y3)} Z"
    )


def _full_ring_path(cx: float, cy: float, r_in: float, r_out: float) -> str:
    # a full circle cannot be one SVG arc; use two half arcs per radius
    left_o, right_o = (cx - r_out, cy), (cx + r_out, cy)
    left_i, right_i = (cx - r_in, cy), (cx + r_in, cy)
    return (
        f"M {_fmt(right_o[0])} {_fmt(right_o[1])} "
        f"A {_fmt(r_out)} {_fmt(r_out)} 0 1 1 {_fmt(left_o[0])} {_fmt(left_o[1])} "
        f"A {_fmt(r_out)} {_fmt(r_out)} 0 1 1 {_fmt(right_o[0])} {_fmt(right_o[1])} Z "
        f"M {_fmt(right_i[0])} {_fmt(right_i[1])} "
        f"A {_fmt(r_in)} {_fmt(r_in)} 0 1 0 {_fmt(left_i[0])} {_fmt(left_i[1])} "
        f"A {_fmt(r_in)} {_fmt(r_in)} 0 1 0 {_fmt(right_i[0])} {_fmt(right_i[1])} Z"
    )


def render_svg(layout: GlyphLayout, palette: PaletteComposition) -> str:
    """Deterministic SVG 1.1 text for the radial glyph."""
    size = layout.size
    cx = cy = size / 2.0
    half = size / 2.0
    r_center = half * layout.center_radius_frac
    r_in = half * layout.annulus_inner_frac
    r_out = half * layout.annulus_outer_frac

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
    ]
    angle = layout.start_angle_deg
    for (color, _), span in zip(palette.accents, layout.spans_deg):
        if span <= 0.0:
            continue
        if span >= 360.0 - 1e-9:
            path = _full_ring_path(cx, cy, r_in, r_out)
            lines.append(f'<path d="{path}" fill="{color.hex()}" fill-rule="evenodd"/>')
        else:
            path = _sector_path(cx, cy, r_in, r_out, angle, angle - span)
            lines.append(f'<path d="{path}" fill="{color.hex()}"/>')
        angle -= span
    lines.append(
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r_center)}" '
        f'fill="{palette.primary.hex()}"/>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_palette_svg(
    palette: PaletteComposition, config: GlyphConfig = GlyphConfig()
) -> str:
    return render_svg(layout_glyph(palette, config), palette)
