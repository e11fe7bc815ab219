"""Poincare-disk kernel shared by the renderer and the geometric oracle."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .pentagrid import CENTER, CellAddress, RegionGraph, neighbor_table

# {5,4}: circumradius R with cosh R = cot(pi/5) cot(pi/4)
CIRCUMRADIUS = math.acosh(1.0 / math.tan(math.pi / 5))
VERTEX_RADIUS = math.tanh(CIRCUMRADIUS / 2)
DEDUP_TOL = 1e-9


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class DiskIsometry:
    """z -> M.z (or M.conj(z) when ``reversing``), M = [[a, b], [conj b, conj a]]."""

    matrix: np.ndarray
    reversing: bool = False

    @classmethod
    def identity(cls) -> "DiskIsometry":
        return cls(np.eye(2, dtype=complex))

    @classmethod
    def rotation(cls, theta: float) -> "DiskIsometry":
        h = cmath.exp(0.5j * theta)
        return cls(np.array([[h, 0], [0, h.conjugate()]], dtype=complex))

    @classmethod
    def reflection_through(cls, p: complex, q: complex) -> "DiskIsometry":
        """Reflection in the geodesic through disk points p and q."""
        # Center c of the orthogonal circle: 2 Re(c conj p) = |p|^2 + 1, same for q.
        a = np.array([[p.real, p.imag], [q.real, q.imag]]) * 2
        rhs = np.array([abs(p) ** 2 + 1, abs(q) ** 2 + 1])
        cx, cy = np.linalg.solve(a, rhs)
        c = complex(cx, cy)
        rho = math.sqrt(abs(c) ** 2 - 1)
        m = np.array([[1j * c / rho, -1j / rho], [1j / rho, -1j * c.conjugate() / rho]])
        return cls(m, True)

    def __call__(self, z: complex) -> complex:
        if self.reversing:
            z = z.conjugate()
        (a, b), (c, d) = self.matrix
        return (a * z + b) / (c * z + d)

    def __matmul__(self, other: "DiskIsometry") -> "DiskIsometry":
        inner = other.matrix.conj() if self.reversing else other.matrix
        return DiskIsometry(self.matrix @ inner, self.reversing != other.reversing)

    def inverse(self) -> "DiskIsometry":
        (a, b), (c, d) = self.matrix
        inv = np.array([[d, -b], [-c, a]]) / (a * d - b * c)
        if self.reversing:
            inv = inv.conj()
        return DiskIsometry(inv, self.reversing)

    def preserves_disk(self, tol: float = 1e-9) -> bool:
        (a, b), (c, d) = self.matrix
        det = a * d - b * c
        if abs(det) < tol:
            return False
        s = cmath.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
        return (abs(c - b.conjugate()) < tol and abs(d - a.conjugate()) < tol
                and abs(abs(a) ** 2 - abs(b) ** 2 - 1) < tol)

    def distance_to_identity(self) -> float:
        m = self.matrix / cmath.sqrt(np.linalg.det(self.matrix))
        return float(min(np.abs(m - np.eye(2)).max(), np.abs(m + np.eye(2)).max()))


def side_angle(k: int) -> float:
    """Direction of the midpoint of base side k (side 0 faces straight up)."""
    return math.pi / 2 + 2 * math.pi * k / 5


def base_pentagon() -> list[complex]:
    """Vertices of the central right-angled pentagon, counter-clockwise.

    Side k joins vertex k and vertex k+1.
    """
    return [cmath.rect(VERTEX_RADIUS, side_angle(k) - math.pi / 5) for k in range(5)]


BASE = base_pentagon()
SIDE_REFLECTIONS = [DiskIsometry.reflection_through(BASE[k], BASE[(k + 1) % 5]) for k in range(5)]


def hyperbolic_distance(z: complex, w: complex) -> float:
    num = 2 * abs(z - w) ** 2
    den = (1 - abs(z) ** 2) * (1 - abs(w) ** 2)
    return math.acosh(1 + num / den)


def interior_angle(vertices: list[complex], k: int) -> float:
    """Hyperbolic interior angle at vertex k (angle between the tangent geodesics)."""
    v = vertices[k]
    t1 = _geodesic_tangent(v, vertices[(k + 1) % 5])
    t2 = _geodesic_tangent(v, vertices[k - 1])
    ang = abs(cmath.phase(t2 / t1))
    return ang


def _geodesic_tangent(p: complex, q: complex) -> complex:
    # move p to 0; the geodesic becomes a diameter
    w = (q - p) / (1 - p.conjugate() * q)
    # derivative of the inverse map z -> (z + p)/(1 + conj(p) z) at 0 is 1 - |p|^2 (real)
    return w / abs(w)


@dataclass(frozen=True)
class Frame:
    """Placement of a cell: isometry from the base pentagon plus side bookkeeping.

    Slot i (1-based, counter-clockwise from the parent side) is base side
    ``(parent_side + sign * (i - 1)) % 5``.
    """

    iso: DiskIsometry
    parent_side: int
    sign: int

    def base_side(self, slot: int) -> int:
        return (self.parent_side + self.sign * (slot - 1)) % 5

    def across(self, slot: int) -> "Frame":
        k = self.base_side(slot)
        return Frame(self.iso @ SIDE_REFLECTIONS[k], k, -self.sign)

    @property
    def center(self) -> complex:
        return self.iso(0j)

    def vertices(self) -> list[complex]:
        return [self.iso(v) for v in BASE]

    def slot_segment(self, slot: int) -> tuple[complex, complex]:
        k = self.base_side(slot)
        return self.iso(BASE[k]), self.iso(BASE[(k + 1) % 5])


CENTER_FRAME = Frame(DiskIsometry.identity(), 0, 1)


def _child_slot(a: CellAddress, i: int) -> int:
    return i + 2 if a.arity == 3 else i + 3


def frame_of(a: CellAddress, cache: dict[CellAddress, Frame] | None = None) -> Frame:
    if cache is not None and a in cache:
        return cache[a]
    if a.is_center:
        f = CENTER_FRAME
    elif not a.path:
        f = CENTER_FRAME.across(a.sector + 1)
    else:
        par = a.parent()
        f = frame_of(par, cache).across(_child_slot(par, a.path[-1]))
    if cache is not None:
        cache[a] = f
    return f


def place(region: RegionGraph, a: CellAddress) -> DiskIsometry:
    """Isometry carrying the base pentagon onto cell ``a``."""
    if a not in region:
        raise KeyError(a)
    return frame_of(a).iso


# ---------------------------------------------------------------------------
# Independent construction: reflect the base pentagon across its sides.


@dataclass
class OracleTiling:
    frames: list[Frame]
    levels: list[int]
    neighbors: list[list[int | None]]  # counter-clockwise, entry j = across base side order
    radius: int

    def ccw_neighbors(self, i: int) -> list[int | None]:
        """Neighbor indices counter-clockwise, starting from the parent side."""
        f = self.frames[i]
        return [self.neighbors[i][f.base_side(s)] for s in range(1, 6)]


def geometric_oracle(radius: int) -> OracleTiling:
    """BFS over reflections; cells deduplicated by center position."""
    if radius > 8:
        raise ValueError("the oracle is limited to radius 8")
    frames = [CENTER_FRAME]
    levels = [0]
    nbrs: list[list[int | None]] = [[None] * 5]
    buckets: dict[tuple[int, int], list[int]] = {}

    def key(z: complex) -> tuple[int, int]:
        return (round(z.real * 1e5), round(z.imag * 1e5))

    def lookup(z: complex) -> int | None:
        kx, ky = key(z)
        found = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in buckets.get((kx + dx, ky + dy), ()):
                    d = hyperbolic_distance(frames[j].center, z)
                    if d < DEDUP_TOL:
                        if found is not None and found != j:
                            raise OracleError("two cells within dedup tolerance")
                        found = j
                    elif d < 1e-3:
                        raise OracleError(f"near-collision at distance {d:g}")
        return found

    buckets[key(0j)] = [0]
    frontier = [0]
    for lev in range(1, radius + 1):
        nxt = []
        for i in frontier:
            f = frames[i]
            for k in range(5):
                if nbrs[i][k] is not None:
                    continue
                g = Frame(f.iso @ SIDE_REFLECTIONS[k], k, -f.sign)
                j = lookup(g.center)
                if j is None:
                    j = len(frames)
                    frames.append(g)
                    levels.append(lev)
                    nbrs.append([None] * 5)
                    buckets.setdefault(key(g.center), []).append(j)
                    nxt.append(j)
                nbrs[i][k] = j
                # the shared side is base side k in both frames
                nbrs[j][k] = i
        frontier = nxt
    return OracleTiling(frames, levels, nbrs, radius)


def match_oracle(region: RegionGraph, oracle: OracleTiling) -> dict[CellAddress, int]:
    """Map addresses to oracle cells, checking every neighbor slot.

    The map fixes the center and the side-1 orientation; every interior cell's
    counter-clockwise neighbor list must coincide with the oracle's.  Raises
    AssertionError on the first disagreement.
    """
    mapping: dict[CellAddress, int] = {CENTER: 0}
    order = sorted(region.cells, key=lambda c: c.level)
    for a in order:
        if a.level >= min(region.radius, oracle.radius):
            continue
        i = mapping[a]
        comb = neighbor_table(a)
        geo = oracle.ccw_neighbors(i) if not a.is_center else [oracle.neighbors[0][k] for k in range(5)]
        if not a.is_center:
            # the oracle frame for i need not have been built along the same tree
            # edge, so align on the parent
            p = mapping[comb[0]]
            shift = geo.index(p)
            geo = geo[shift:] + geo[:shift]
        for n, j in zip(comb, geo):
            if j is None:
                raise AssertionError(f"oracle has no cell across a side of {a}")
            if n in mapping:
                if mapping[n] != j:
                    raise AssertionError(f"neighbor {n} of {a} maps to {mapping[n]}, oracle says {j}")
            else:
                mapping[n] = j
    images = list(mapping.values())
    if len(set(images)) != len(images):
        raise AssertionError("address map is not injective")
    return mapping
