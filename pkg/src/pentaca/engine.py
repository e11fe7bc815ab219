"""Synchronous stepping of finite configurations over the pentagrid."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .pentagrid import CellAddress, RegionGraph
from .rules import MissingRule, match


class StructureError(RuntimeError):
    """The track of a configuration is not a contiguous word."""


class LeadWarning(UserWarning):
    pass


@dataclass
class Configuration:
    """Non-blank states by address; every other cell is blank."""

    cells: dict[CellAddress, str] = field(default_factory=dict)
    time: int = 0
    blank: str = "N"

    def __post_init__(self):
        self.cells = {a: s for a, s in self.cells.items() if s != self.blank}

    def __getitem__(self, a: CellAddress) -> str:
        return self.cells.get(a, self.blank)

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def support(self) -> set[CellAddress]:
        return set(self.cells)

    def states(self) -> set[str]:
        return set(self.cells.values())

    def copy(self) -> "Configuration":
        return Configuration(dict(self.cells), self.time, self.blank)

    def dump(self) -> str:
        """Same line format as initial-configuration files."""
        lines = [f"# t={self.time}"]
        for a in sorted(self.cells, key=_addr_key):
            lines.append(f"{a}  {self.cells[a]}")
        return "\n".join(lines) + "\n"


def _addr_key(a: CellAddress):
    return (a.level, -1 if a.sector is None else a.sector, a.path)


def equal(c1: Configuration, c2: Configuration) -> bool:
    return c1.blank == c2.blank and c1.cells == c2.cells


def active_set(c: Configuration, region: RegionGraph) -> set[CellAddress]:
    act = set(c.cells)
    for a in c.cells:
        act.update(region.neighbors_of(a))
    return act


def step(c: Configuration, spec, region: RegionGraph, strict: bool = True,
         side_shift: int = 0) -> Configuration:
    """One synchronous update.

    ``side_shift`` rotates every cell's side numbering; rotation-invariant
    tables must not notice.
    """
    table = spec.table
    cur = c.cells
    blank = c.blank
    new: dict[CellAddress, str] = {}
    k = side_shift % 5
    for a in active_set(c, region):
        nb = region.cells[a].neighbors
        if k:
            nb = nb[k:] + nb[:k]
        state = cur.get(a, blank)
        nbrs = tuple(cur.get(n, blank) for n in nb)
        try:
            nxt = match(table, state, nbrs, strict)
        except MissingRule as exc:
            raise MissingRule(state, nbrs, cell=a, time=c.time) from exc
        if nxt != blank:
            new[a] = nxt
    out = Configuration.__new__(Configuration)
    out.cells, out.time, out.blank = new, c.time + 1, blank
    return out


@dataclass
class Trace:
    initial: Configuration
    steps: list[list[tuple[CellAddress, str, str]]] = field(default_factory=list)
    halted_at: int | None = None
    checkpoints: dict[int, Configuration] = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.steps)

    def configurations(self) -> Iterator[Configuration]:
        c = self.initial.copy()
        yield c.copy()
        for diff in self.steps:
            for a, _, new in diff:
                if new == c.blank:
                    c.cells.pop(a, None)
                else:
                    c.cells[a] = new
            c.time += 1
            yield c.copy()

    def at(self, t: int) -> Configuration:
        if not 0 <= t <= len(self.steps):
            raise IndexError(f"time {t} outside the trace (0..{len(self.steps)})")
        base = max((k for k in self.checkpoints if k <= t), default=None)
        if base is None:
            c, start = self.initial.copy(), 0
        else:
            c, start = self.checkpoints[base].copy(), base
        for diff in self.steps[start:t]:
            for a, _, new in diff:
                if new == c.blank:
                    c.cells.pop(a, None)
                else:
                    c.cells[a] = new
            c.time += 1
        return c

    @property
    def final(self) -> Configuration:
        return self.at(len(self.steps))


def diff(c0: Configuration, c1: Configuration) -> list[tuple[CellAddress, str, str]]:
    out = []
    for a in c0.cells.keys() | c1.cells.keys():
        s0, s1 = c0[a], c1[a]
        if s0 != s1:
            out.append((a, s0, s1))
    out.sort(key=lambda e: _addr_key(e[0]))
    return out


def run(c0: Configuration, spec, max_steps: int, region: RegionGraph | None = None,
        strict: bool = True, checkpoint_every: int = 0, side_shift: int = 0) -> Trace:
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    region = region if region is not None else RegionGraph()
    trace = Trace(c0.copy())
    c = c0
    for _ in range(max_steps):
        nxt = step(c, spec, region, strict, side_shift)
        trace.steps.append(diff(c, nxt))
        if checkpoint_every and nxt.time % checkpoint_every == 0:
            trace.checkpoints[nxt.time - c0.time] = nxt.copy()
        if equal(nxt, c):
            trace.halted_at = len(trace.steps)
            break
        c = nxt
    return trace


# ---------------------------------------------------------------------------


def track_of(c: Configuration, spec) -> tuple[str, ...]:
    """States along the ray, origin first, with the growing front removed.

    Blank holes inside the track are tolerated only when the halt marker of
    the automaton is itself the blank.
    """
    from .automata import ray_index, ray_address

    allowed = spec.track_symbols
    word: list[str] = []
    k = 0
    while True:
        s = c[ray_address(k)]
        if s == c.blank:
            if c[ray_address(k + 1)] == c.blank or spec.marker != c.blank:
                break
        elif s not in allowed and s != spec.front:
            raise StructureError(f"state {s} on the track at position {k}")
        word.append(s)
        k += 1
    if word and word[-1] == spec.front:
        word.pop()
    if any(s == spec.front and s not in allowed for s in word):
        raise StructureError("front state inside the track")
    # nothing may live on the ray past its end
    stray = [a for a in c.cells if (i := ray_index(a)) is not None and i > k]
    if stray:
        raise StructureError(f"track discontinuity: {stray[0]} is set past the end at {k}")
    while word and word[-1] == c.blank:
        word.pop()
    return tuple(word)


def parse_init(text: str, blank: str = "N") -> Configuration:
    from .pentagrid import AddressError

    cells: dict[CellAddress, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ValueError(f"line {lineno}: expected 'address state'")
        try:
            a = CellAddress.parse(toks[0])
        except AddressError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if a in cells:
            raise ValueError(f"line {lineno}: {a} assigned twice")
        cells[a] = toks[1]
    return Configuration(cells, 0, blank)


def load_init(text: str, spec=None, blank: str = "N") -> Configuration:
    c = parse_init(text, blank)
    if spec is not None:
        check_lead(c, spec)
    return c


def check_lead(c: Configuration, spec, need: int = 2) -> bool:
    """Warn unless the first ``need`` track cells hold the embedded blank."""
    from .automata import ray_address

    lead = [c[ray_address(k)] for k in range(need)]
    ok = all(s in (spec.embedded.blank, c.blank) for s in lead)
    if not ok:
        warnings.warn(f"the embedded word needs {need} blank cells at the origin, got {lead}",
                      LeadWarning, stacklevel=2)
    return ok


def rename_states(c: Configuration, mapping: Mapping[str, str]) -> Configuration:
    return Configuration({a: mapping.get(s, s) for a, s in c.cells.items()}, c.time,
                         mapping.get(c.blank, c.blank))
