"""Poincare-disk SVG pictures of configurations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import Frame, base_pentagon, frame_of
from .pentagrid import CellAddress, RegionGraph, cells_up_to

__all__ = ["Palette", "RenderError", "base_pentagon", "render_svg", "cell_polygon", "DEFAULT_PALETTE"]


class RenderError(ValueError):
    pass


# dark red track, light yellow W0, shades of blue for the blank
DEFAULT_COLORS = {
    "B": "#8b0000", "_": "#8b0000",
    "B0": "#ff2020", "W0": "#fff3a0", "W1": "#3cb043", "W": "#ffe600",
    "H": "#6a0dad",
    "T": "#ffe600", "0": "#fff3a0", "A": "#ff2020",
    "1": "#c04000", "y": "#d2691e", "H'": "#a0522d",
}
BLANK_HUES = ("#1f4e9c", "#2a64c5", "#3d7be0", "#5b93ea", "#7aabf0")


@dataclass
class Palette:
    colors: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_COLORS))
    blank: str = "N"
    blank_hues: tuple[str, ...] = BLANK_HUES
    background: str = "#ffffff"
    stroke: str = "#202020"

    def fill(self, state: str, level: int) -> str:
        if state == self.blank:
            # one state, several hues: cosmetic only
            return self.blank_hues[level % len(self.blank_hues)]
        try:
            return self.colors[state]
        except KeyError:
            raise RenderError(f"no color for state {state!r}") from None

    def covers(self, states) -> list[str]:
        return sorted(s for s in set(states) if s != self.blank and s not in self.colors)

    @classmethod
    def parse(cls, text: str, base: "Palette | None" = None) -> "Palette":
        pal = Palette(dict(base.colors)) if base else Palette({})
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            # colors start with '#', so only whole-line comments exist
            if not line or line.startswith("#"):
                continue
            state, sep, color = line.partition("=")
            color = color.strip()
            if not sep or not state.strip() or len(color) != 7 or not color.startswith("#"):
                raise RenderError(f"palette line {lineno}: expected state=#rrggbb")
            try:
                int(color[1:], 16)
            except ValueError:
                raise RenderError(f"palette line {lineno}: bad color {color!r}") from None
            pal.colors[state.strip()] = color.lower()
        return pal

    def dump(self) -> str:
        return "".join(f"{s}={c}\n" for s, c in sorted(self.colors.items()))


DEFAULT_PALETTE = Palette()


def cell_polygon(frame: Frame) -> list[complex]:
    return frame.vertices()


def _geodesic_circle(p: complex, q: complex) -> tuple[complex, float] | None:
    """Center and radius of the circle orthogonal to the unit circle through p, q;
    None when p, q lie on a diameter."""
    det = 2 * (p.real * q.imag - p.imag * q.real)
    if abs(det) < 1e-12:
        return None
    a = abs(p) ** 2 + 1
    b = abs(q) ** 2 + 1
    cx = (a * q.imag - b * p.imag) / det
    cy = (b * p.real - a * q.real) / det
    c = complex(cx, cy)
    return c, math.sqrt(max(abs(c) ** 2 - 1, 0.0))


def _path(verts: list[complex], scale: float, half: float) -> str:
    def pt(z: complex) -> str:
        return f"{half + z.real * scale:.3f},{half - z.imag * scale:.3f}"

    parts = [f"M{pt(verts[0])}"]
    for i in range(5):
        p, q = verts[i], verts[(i + 1) % 5]
        circ = _geodesic_circle(p, q)
        if circ is None or circ[1] * scale > 1e6:
            parts.append(f"L{pt(q)}")
            continue
        c, rho = circ
        cross = ((p - c).conjugate() * (q - c)).imag
        # the y flip keeps the picture's orientation, and SVG's positive sweep is
        # clockwise on screen
        sweep = 0 if cross > 0 else 1
        parts.append(f"A{rho * scale:.3f},{rho * scale:.3f} 0 0 {sweep} {pt(q)}")
    return "".join(parts) + "Z"


def render_svg(c, region: RegionGraph, palette: Palette = DEFAULT_PALETTE, size: int = 600,
               radius: int | None = None, title: str | None = None) -> str:
    """Standalone SVG 1.1 document of configuration ``c``.

    Draws every cell of ``region`` up to ``radius`` (default: the region's
    radius) plus the configuration's own cells within that radius.
    """
    radius = region.radius if radius is None else radius
    blank = getattr(c, "blank", palette.blank)
    missing = palette.covers(s for s in c.cells.values())
    if missing:
        raise RenderError(f"palette has no color for {missing}")
    cells = {a for a in region.cells if a.level <= radius}
    cells.update(a for a in cells_up_to(min(radius, region.radius)))
    cells.update(a for a in c.cells if a.level <= radius)
    order = sorted(cells, key=lambda a: (a.level, -1 if a.sector is None else a.sector, a.path))

    half = size / 2
    scale = half * 0.98
    cache: dict[CellAddress, Frame] = {}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append(f'<rect width="{size}" height="{size}" fill="{palette.background}"/>')
    out.append(f'<circle cx="{half:.3f}" cy="{half:.3f}" r="{scale:.3f}" fill="none" '
               f'stroke="{palette.stroke}" stroke-width="1"/>')
    sw = max(size / 1200, 0.2)
    for a in order:
        state = c.cells.get(a, blank)
        fill = palette.fill(state if state != blank else palette.blank, a.level)
        verts = cell_polygon(frame_of(a, cache))
        out.append(f'<path d="{_path(verts, scale, half)}" fill="{fill}" stroke="{palette.stroke}" '
                   f'stroke-width="{sw:.3f}"><title>{a} {_escape(state)}</title></path>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("'", "&apos;")
