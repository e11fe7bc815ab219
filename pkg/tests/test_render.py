import math
import re
import xml.etree.ElementTree as ET

import pytest

from pentaca.automata import seed_configuration
from pentaca.engine import Configuration
from pentaca.geometry import frame_of
from pentaca.pentagrid import disk, neighbor_table
from pentaca.render import (
    BLANK_HUES, DEFAULT_PALETTE, Palette, RenderError, _geodesic_circle, cell_polygon, render_svg,
)

SVG = "{http://www.w3.org/2000/svg}"


def fills(svg):
    root = ET.fromstring(svg)
    return [p.get("fill") for p in root.iter(SVG + "path")]


def test_valid_xml_and_counts():
    svg = render_svg(Configuration(), disk(3))
    root = ET.fromstring(svg)
    assert root.tag == SVG + "svg" and root.get("version") == "1.1"
    assert len(list(root.iter(SVG + "path"))) == len(disk(3))


def test_empty_configuration_is_all_blank():
    assert set(fills(render_svg(Configuration(), disk(3)))) <= set(BLANK_HUES)


def test_seed_colors():
    got = fills(render_svg(seed_configuration(), disk(3)))
    assert got.count("#fff3a0") == 1     # the W0 cell, light yellow
    assert got.count("#8b0000") == 2     # the two track cells, dark red
    assert len(got) - 3 == sum(got.count(h) for h in BLANK_HUES)


def test_deterministic():
    c = seed_configuration()
    assert render_svg(c, disk(3), title="t=0") == render_svg(c, disk(3), title="t=0")


def test_missing_color():
    with pytest.raises(RenderError):
        render_svg(Configuration({next(iter(disk(1))): "Q"}), disk(1))


def test_palette_parse():
    pal = Palette.parse("# comment\nB=#00FF00\n\nQ = #123456\n", DEFAULT_PALETTE)
    assert pal.colors["B"] == "#00ff00" and pal.colors["Q"] == "#123456"
    assert pal.colors["W0"] == DEFAULT_PALETTE.colors["W0"]
    assert Palette.parse(pal.dump()).colors == pal.colors
    for bad in ("B", "B=red", "B=#12345", "=#123456", "B=#12345g"):
        with pytest.raises(RenderError):
            Palette.parse(bad)
    assert pal.fill("N", 7) == BLANK_HUES[7 % len(BLANK_HUES)]
    assert pal.covers(["N", "B", "Z"]) == ["Z"]


def svg_arc_center(x1, y1, x2, y2, r, large, sweep):
    """Endpoint-to-center conversion of the SVG arc command."""
    dx, dy = (x1 - x2) / 2, (y1 - y2) / 2
    num = r * r * r * r - r * r * dy * dy - r * r * dx * dx
    den = r * r * dy * dy + r * r * dx * dx
    k = math.sqrt(max(num, 0.0) / den)
    if large == sweep:
        k = -k
    cx, cy = k * r * dy / r, -k * r * dx / r
    return cx + (x1 + x2) / 2, cy + (y1 + y2) / 2


def test_arcs_bend_the_right_way():
    size, half = 600, 300.0
    scale = half * 0.98
    svg = render_svg(Configuration(), disk(2), size=size)
    n = 0
    for d in re.findall(r'd="([^"]+)"', svg):
        pts = re.findall(r"([MLA])([^MLAZ]+)", d)
        x, y = map(float, pts[0][1].split(","))
        for cmd, arg in pts[1:]:
            if cmd == "A":
                toks = arg.replace(",", " ").split()
                r, large, sweep = float(toks[0]), int(toks[3]), int(toks[4])
                x2, y2 = float(toks[5]), float(toks[6])
                cx, cy = svg_arc_center(x, y, x2, y2, r, large, sweep)
                p = complex((x - half) / scale, (half - y) / scale)
                q = complex((x2 - half) / scale, (half - y2) / scale)
                c, rho = _geodesic_circle(p, q)
                assert abs(cx - (half + c.real * scale)) < 0.05
                assert abs(cy - (half - c.imag * scale)) < 0.05
                assert abs(abs(c) ** 2 - 1 - rho * rho) < 1e-9
                n += 1
            else:
                x2, y2 = map(float, arg.split(","))
            x, y = x2, y2
    assert n > 0


def test_centers_inside_and_sides_shared():
    region = disk(4)
    for a in region:
        f = frame_of(a)
        assert abs(f.center) < 1
        if a.level >= 4:
            continue
        verts = cell_polygon(f)
        for b in neighbor_table(a):
            vb = cell_polygon(frame_of(b))
            shared = [v for v in verts if min(abs(v - w) for w in vb) < 1e-6]
            assert len(shared) == 2


def test_radius_cutoff():
    svg = render_svg(seed_configuration(), disk(4), radius=1)
    # deeper cells of the configuration are cut off as well
    assert len(fills(svg)) == 6
