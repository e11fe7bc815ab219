"""Combinatorial model of the pentagrid {5,4}.

Cells are addressed by Fibonacci-tree coordinates: the central pentagon, or a
sector 0..4 plus a child path inside that sector's tree.  White nodes have
three children (black, white, white), black nodes two (black, white).

Side numbering of every cell is counter-clockwise, side 1 facing the parent
(for the center, side 1 faces the root of sector 0).  With that convention:

    white cell a:  parent, a.0, a.1, a.2, next(a).0
    black cell a:  parent, prev(parent), a.0, a.1, next(a).0

where next/prev walk the cells of one level counter-clockwise around the
center.  The black child a.0 is the corner cell shared with prev(a).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

SECTORS = 5


class AddressError(ValueError):
    pass


class NeedsGrowth(LookupError):
    """Raised when a cell's neighbor slots are not resolved in a region."""

    def __init__(self, address: "CellAddress"):
        super().__init__(f"cell {address} is not resolved in the region")
        self.address = address


class Color(Enum):
    WHITE = "W"
    BLACK = "B"


@dataclass(frozen=True, slots=True, order=True)
class CellAddress:
    """Canonical address; ``sector is None`` denotes the central cell."""

    sector: int | None = None
    path: tuple[int, ...] = ()

    @property
    def is_center(self) -> bool:
        return self.sector is None

    @property
    def level(self) -> int:
        return 0 if self.sector is None else len(self.path) + 1

    @property
    def color(self) -> Color:
        if self.sector is None or not self.path or self.path[-1] != 0:
            return Color.WHITE
        return Color.BLACK

    @property
    def arity(self) -> int:
        """Number of tree children."""
        return 3 if self.color is Color.WHITE else 2

    def child(self, i: int) -> "CellAddress":
        if self.sector is None:
            raise AddressError("the center has no tree children; use sector roots")
        if not 0 <= i < self.arity:
            raise AddressError(f"child index {i} out of range for {self}")
        return CellAddress(self.sector, self.path + (i,))

    def parent(self) -> "CellAddress":
        if self.sector is None:
            raise AddressError("the center has no parent")
        if not self.path:
            return CENTER
        return CellAddress(self.sector, self.path[:-1])

    def __str__(self) -> str:
        if self.sector is None:
            return "C"
        return f"{self.sector}:" + ".".join(map(str, self.path))

    @classmethod
    def parse(cls, text: str) -> "CellAddress":
        text = text.strip()
        if text == "C":
            return CENTER
        sector, sep, rest = text.partition(":")
        if not sep:
            raise AddressError(f"malformed address {text!r}")
        try:
            path = tuple(int(p) for p in rest.split(".")) if rest else ()
            return normalize(int(sector), path)
        except ValueError as exc:
            raise AddressError(f"malformed address {text!r}") from exc


CENTER = CellAddress()


def root(sector: int) -> CellAddress:
    return CellAddress(sector % SECTORS, ())


def normalize(sector: int, raw_path: Iterable[int]) -> CellAddress:
    """Resolve a raw child path to its canonical address.

    Besides the tree children, a raw path may step through the last outward
    side of a node: index 3 of a white node or index 2 of a black node.  That
    side leads to the black child of the next node on the same level, so such
    paths are aliases and get rewritten.
    """
    if sector is None:
        if list(raw_path):
            raise AddressError("the center takes no path")
        return CENTER
    if not 0 <= sector < SECTORS:
        raise AddressError(f"sector {sector} out of range 0..4")
    addr = CellAddress(sector, ())
    for i in raw_path:
        i = int(i)
        if 0 <= i < addr.arity:
            addr = CellAddress(addr.sector, addr.path + (i,))
        elif i == addr.arity:
            addr = next_on_level(addr).child(0)
        else:
            raise AddressError(f"index {i} exceeds the {addr.arity + 1} outward sides of {addr}")
    return addr


@functools.lru_cache(maxsize=None)
def next_on_level(a: CellAddress) -> CellAddress:
    """Counter-clockwise successor of ``a`` among the cells of its level."""
    if a.sector is None:
        raise AddressError("the center is alone on its level")
    if not a.path:
        return root(a.sector + 1)
    par = a.parent()
    i = a.path[-1]
    if i < par.arity - 1:
        return CellAddress(a.sector, a.path[:-1] + (i + 1,))
    return next_on_level(par).child(0)


@functools.lru_cache(maxsize=None)
def prev_on_level(a: CellAddress) -> CellAddress:
    if a.sector is None:
        raise AddressError("the center is alone on its level")
    if not a.path:
        return root(a.sector - 1)
    par = a.parent()
    i = a.path[-1]
    if i > 0:
        return CellAddress(a.sector, a.path[:-1] + (i - 1,))
    q = prev_on_level(par)
    return q.child(q.arity - 1)


@functools.lru_cache(maxsize=1 << 20)
def neighbor_table(a: CellAddress) -> tuple[CellAddress, ...]:
    """The 5 neighbors of ``a`` in side order (pure function of the address)."""
    if a.sector is None:
        return tuple(root(k) for k in range(SECTORS))
    par = a.parent()
    corner = next_on_level(a).child(0)
    if a.color is Color.WHITE:
        return (par, a.child(0), a.child(1), a.child(2), corner)
    return (par, prev_on_level(par), a.child(0), a.child(1), corner)


def fibonacci_number(n: int, sector: int) -> CellAddress:
    """Address of node ``n`` (1-based, level order) of a sector's tree."""
    if n < 1:
        raise AddressError("tree numbers start at 1")
    level = [CellAddress(sector % SECTORS, ())]
    first = 1
    while n >= first + len(level):
        first += len(level)
        level = [c.child(i) for c in level for i in range(c.arity)]
    return level[n - first]


@dataclass(frozen=True, slots=True)
class CellRecord:
    address: CellAddress
    neighbors: tuple[CellAddress, ...]
    level: int
    color: Color


def make_record(a: CellAddress) -> CellRecord:
    return CellRecord(a, neighbor_table(a), a.level, a.color)


@dataclass
class RegionGraph:
    """A finite set of resolved cells.

    All cells at level <= ``radius`` are present.  Cells beyond the radius can
    be added one by one with :meth:`resolve`, which is how the simulation
    engine follows a ray that goes far deeper than any full disk could.
    A cell is *interior* when all five of its neighbors are resolved too.
    """

    cells: dict[CellAddress, CellRecord] = field(default_factory=dict)
    radius: int = 0

    def __contains__(self, a: CellAddress) -> bool:
        return a in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[CellAddress]:
        return iter(self.cells)

    def resolve(self, a: CellAddress) -> CellRecord:
        rec = self.cells.get(a)
        if rec is None:
            rec = self.cells[a] = make_record(a)
        return rec

    def is_interior(self, a: CellAddress) -> bool:
        rec = self.cells.get(a)
        return rec is not None and all(n in self.cells for n in rec.neighbors)

    def neighbors_of(self, a: CellAddress) -> tuple[CellAddress, ...]:
        """Neighbor slots of ``a``, resolving it and its ring on demand."""
        rec = self.resolve(a)
        for n in rec.neighbors:
            self.resolve(n)
        return rec.neighbors

    def dump(self) -> str:
        """One line per cell: ``address level color n1 .. n5``."""
        lines = []
        for a in sorted(self.cells, key=lambda c: (c.level, -1 if c.sector is None else c.sector, c.path)):
            rec = self.cells[a]
            nb = " ".join(str(n) for n in rec.neighbors)
            lines.append(f"{a}  {rec.level}  {rec.color.value}  {nb}")
        return "\n".join(lines) + "\n"


def neighbors(region: RegionGraph, a: CellAddress) -> tuple[CellAddress, ...]:
    if not region.is_interior(a):
        raise NeedsGrowth(a)
    return region.cells[a].neighbors


def cells_up_to(radius: int) -> Iterator[CellAddress]:
    """Every cell at level <= radius, level by level."""
    if radius < 0:
        return
    yield CENTER
    level = [root(k) for k in range(SECTORS)]
    for _ in range(radius):
        yield from level
        level = [c.child(i) for c in level for i in range(c.arity)]


def grow(region: RegionGraph, new_radius: int) -> RegionGraph:
    """Return a new region containing the full disk of ``new_radius``."""
    if new_radius < region.radius:
        raise ValueError("regions only grow")
    cells = dict(region.cells)
    for a in cells_up_to(new_radius):
        if a not in cells:
            cells[a] = make_record(a)
    return RegionGraph(cells, new_radius)


def disk(radius: int) -> RegionGraph:
    return grow(RegionGraph(), radius)


def level_color_counts(sector: int, levels: int) -> list[tuple[int, int]]:
    """(white, black) node counts for tree depths 0..levels-1 of one sector."""
    out = []
    level = [root(sector)]
    for _ in range(levels):
        w = sum(1 for c in level if c.color is Color.WHITE)
        out.append((w, len(level) - w))
        level = [c.child(i) for c in level for i in range(c.arity)]
    return out
