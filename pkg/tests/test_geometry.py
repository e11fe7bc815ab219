import cmath
import math

import numpy as np
import pytest

from pentaca.geometry import (
    BASE, SIDE_REFLECTIONS, VERTEX_RADIUS, DiskIsometry, OracleError, frame_of, geometric_oracle,
    interior_angle, place,
)
from pentaca.pentagrid import CENTER, CellAddress, disk, neighbor_table, root
from pentaca.render import base_pentagon


def test_right_angles():
    verts = base_pentagon()
    for k in range(5):
        assert abs(interior_angle(verts, k) - math.pi / 2) < 1e-12


def test_fivefold_symmetry():
    verts = base_pentagon()
    rot = cmath.exp(2j * math.pi / 5)
    for k in range(5):
        assert abs(verts[k] * rot - verts[(k + 1) % 5]) < 1e-12


def test_vertex_radius_by_bisection():
    def angle(r):
        vs = [cmath.rect(r, 2 * math.pi * k / 5) for k in range(5)]
        return interior_angle(vs, 0)

    lo, hi = 0.05, 0.95  # angle decreases with r
    for _ in range(100):
        mid = (lo + hi) / 2
        if angle(mid) > math.pi / 2:
            lo = mid
        else:
            hi = mid
    assert abs(lo - VERTEX_RADIUS) < 1e-12


def test_place_center_is_identity():
    assert place(disk(1), CENTER).distance_to_identity() < 1e-12


def test_root_is_one_reflection():
    iso = place(disk(1), root(0)).matrix
    ref = SIDE_REFLECTIONS[0].matrix
    # same projective transformation
    ratio = iso / ref
    assert np.allclose(ratio, ratio[0, 0])


def test_round_trip_across_shared_side():
    for a in [CENTER, root(2), CellAddress(1, (0,)), CellAddress(4, (2, 1))]:
        f = frame_of(a)
        for slot in range(1, 6):
            back = f.across(slot)
            # crossing again through the same base side returns
            k = f.base_side(slot)
            g = back.iso @ SIDE_REFLECTIONS[k]
            assert (g @ f.iso.inverse()).distance_to_identity() < 1e-9


def test_isometries_preserve_disk():
    for a in disk(3):
        iso = frame_of(a).iso
        assert iso.preserves_disk()
        assert abs(iso(0j)) < 1


def test_reflection_is_involution():
    for r in SIDE_REFLECTIONS:
        assert (r @ r).distance_to_identity() < 1e-12
    # fixes the endpoints of its side
    r = SIDE_REFLECTIONS[0]
    assert abs(r(BASE[0]) - BASE[0]) < 1e-12 and abs(r(BASE[1]) - BASE[1]) < 1e-12


def test_neighbor_frames_share_a_side():
    for a in disk(3):
        if a.level >= 3:
            continue
        fa = frame_of(a)
        for slot, b in enumerate(neighbor_table(a), 1):
            p, q = fa.slot_segment(slot)
            vb = frame_of(b).vertices()
            assert min(abs(p - v) for v in vb) < 1e-9
            assert min(abs(q - v) for v in vb) < 1e-9


def test_oracle_basics():
    o0 = geometric_oracle(0)
    assert len(o0.frames) == 1
    assert len(geometric_oracle(1).frames) == 6
    with pytest.raises(ValueError):
        geometric_oracle(9)


def test_oracle_error_is_a_runtime_error():
    assert issubclass(OracleError, RuntimeError)


def test_composition_matches_application():
    a, b = SIDE_REFLECTIONS[1], DiskIsometry.rotation(0.7)
    z = 0.1 + 0.2j
    assert abs((a @ b)(z) - a(b(z))) < 1e-12
    assert abs((b @ a)(z) - b(a(z))) < 1e-12
    assert abs(a.inverse()(a(z)) - z) < 1e-12
