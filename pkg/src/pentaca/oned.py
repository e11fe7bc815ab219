"""Embedded one-dimensional automata: a direct simulator and the track comparator.

File format::

    @alphabet _ 0 1 y A T H'
    @blank _
    @halt 0 T y
    x y z u          (one triple rule per line; '#' starts a comment)

The halt triple maps to the reserved marker ``H``; the marker may also appear
in the rules' left-hand sides (cleanup after the halt).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .rules import MissingRule, ParseError

HALT_MARKER = "H"

Triple = tuple[str, str, str]


class GrowthWarning(UserWarning):
    """The embedded automaton outruns the speed budget of the ray."""


@dataclass(frozen=True)
class OneDAutomaton:
    alphabet: tuple[str, ...]
    blank: str
    rules: Mapping[Triple, str]
    halt_trigger: Triple | None = None
    name: str = ""

    def __post_init__(self):
        if self.blank not in self.alphabet:
            raise ValueError(f"blank {self.blank!r} is not in the alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("repeated symbol in the alphabet")
        if HALT_MARKER in self.alphabet:
            raise ValueError(f"{HALT_MARKER} is reserved for the halt marker")
        b = self.blank
        if self.rules.get((b, b, b), b) != b:
            raise ValueError("the blank triple must map to the blank")
        ok = set(self.alphabet) | {HALT_MARKER}
        for k, u in self.rules.items():
            if not set(k) <= ok or u not in ok:
                raise ValueError(f"rule {' '.join(k)} -> {u} uses unknown symbols")
        if self.halt_trigger is not None:
            if not set(self.halt_trigger) <= set(self.alphabet):
                raise ValueError("halt trigger outside the alphabet")
            if self.rules.get(self.halt_trigger) != HALT_MARKER:
                raise ValueError("the halt trigger must map to the halt marker")

    @property
    def symbols(self) -> tuple[str, ...]:
        """Alphabet plus the halt marker when the automaton can halt."""
        return self.alphabet + ((HALT_MARKER,) if self.halt_trigger else ())

    def apply(self, x: str, y: str, z: str, position: int | None = None) -> str:
        try:
            return self.rules[(x, y, z)]
        except KeyError:
            if (x, y, z) == (self.blank,) * 3:
                return self.blank
            raise MissingRule(y, (x, z), cell=position) from None

    def ordinary_rules(self) -> list[tuple[Triple, str]]:
        """Rules other than the halt trigger, in a stable order."""
        b = self.blank
        out = [(k, u) for k, u in self.rules.items() if k != self.halt_trigger]
        if (b, b, b) not in self.rules:
            out.insert(0, ((b, b, b), b))
        return out


def parse_oned(text: str, name: str = "") -> OneDAutomaton:
    alphabet = blank = trigger = None
    rules: dict[Triple, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "@alphabet":
            alphabet = tuple(toks[1:])
        elif toks[0] == "@blank":
            if len(toks) != 2:
                raise ParseError("@blank takes one symbol", lineno)
            blank = toks[1]
        elif toks[0] == "@halt":
            if len(toks) != 4:
                raise ParseError("@halt takes a triple", lineno)
            trigger = tuple(toks[1:])
        elif toks[0].startswith("@"):
            raise ParseError(f"unknown directive {toks[0]}", lineno)
        else:
            if len(toks) != 4:
                raise ParseError(f"expected 'x y z u', got {len(toks)} fields", lineno)
            k = tuple(toks[:3])
            if k in rules and rules[k] != toks[3]:
                raise ParseError(f"two rules for {' '.join(k)}", lineno)
            rules[k] = toks[3]
    if alphabet is None or blank is None:
        raise ParseError("missing @alphabet or @blank header")
    if trigger is not None:
        if rules.get(trigger, HALT_MARKER) != HALT_MARKER:
            raise ParseError("the halt triple has an ordinary rule")
        rules[trigger] = HALT_MARKER
    try:
        return OneDAutomaton(alphabet, blank, rules, trigger, name)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_oned(m: OneDAutomaton) -> str:
    lines = ["@alphabet " + " ".join(m.alphabet), f"@blank {m.blank}"]
    if m.halt_trigger:
        lines.append("@halt " + " ".join(m.halt_trigger))
    for k, u in m.rules.items():
        if k != m.halt_trigger:
            lines.append(" ".join((*k, u)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tape:
    """Semi-infinite tape; ``word[i]`` sits at position ``origin_offset + i``.

    Position 0 is the fixed end.  Trailing blanks are trimmed.
    """

    word: tuple[str, ...]
    origin_offset: int = 0
    blank: str = "_"

    def __post_init__(self):
        if self.origin_offset < 0:
            raise ValueError("nothing lives left of the fixed end")
        w = list(self.word)
        while w and w[-1] == self.blank:
            w.pop()
        object.__setattr__(self, "word", tuple(w))

    @classmethod
    def from_word(cls, word: Sequence[str] | str, blank: str = "_", lead: int = 0) -> "Tape":
        syms = word.split() if isinstance(word, str) else list(word)
        return cls(tuple([blank] * lead + syms), 0, blank)

    def __getitem__(self, pos: int) -> str:
        i = pos - self.origin_offset
        return self.word[i] if 0 <= i < len(self.word) else self.blank

    @property
    def end(self) -> int:
        """One past the rightmost non-blank position."""
        return self.origin_offset + len(self.word)

    def cells(self, n: int) -> tuple[str, ...]:
        return tuple(self[i] for i in range(n))


def step_1d(t: Tape, m: OneDAutomaton) -> Tape:
    n = t.end + 1
    out = []
    for i in range(n):
        # position -1 is a permanent blank
        left = t[i - 1] if i > 0 else m.blank
        out.append(m.apply(left, t[i], t[i + 1], position=i))
    return Tape(tuple(out), 0, m.blank)


def run_1d(t: Tape, m: OneDAutomaton, steps: int) -> list[Tape]:
    tapes = [t]
    for _ in range(steps):
        tapes.append(step_1d(tapes[-1], m))
    return tapes


def growth_violations(m: OneDAutomaton, t: Tape, steps: int) -> list[int]:
    """Times at which the occupied interval grew too fast.

    The ray delivers a new blank cell every second step; the embedded run may
    leave its interval by one cell only after keeping it for three steps.
    """
    bad = []
    # the run's history before time 0 is unknown, so the first growth is free
    last_growth = None
    end = t.end
    for time in range(1, steps + 1):
        t = step_1d(t, m)
        if t.end > end:
            if t.end - end > 1 or (last_growth is not None and time - last_growth < 4):
                bad.append(time)
            last_growth = time
        end = max(end, t.end)
    return bad


def check_growth(m: OneDAutomaton, t: Tape, steps: int) -> bool:
    bad = growth_violations(m, t, steps)
    if bad:
        warnings.warn(f"{m.name or '1D automaton'}: interval grows too fast at steps {bad[:5]}",
                      GrowthWarning, stacklevel=2)
    return not bad


# ---------------------------------------------------------------------------
# Stand-in for the embedded machine: a head T walking right over a counter of
# 1s, one cell per four steps, leaving 0s behind.  Reaching the end marker y
# fires the halt triple 0 T y.

STUB_ALPHABET = ("_", "0", "1", "y", "A", "T", "H'")


def stub_automaton() -> OneDAutomaton:
    r: dict[Triple, str] = {}
    b, h = "_", HALT_MARKER
    head_right = ("1", "_")
    # head cycle: T x -> T A -> T H' -> A H' -> 0 T
    for x in head_right:
        r[("0", "T", x)] = "T"
    r[("0", "T", "A")] = "T"
    r[("0", "T", "H'")] = "A"
    r[("0", "A", "H'")] = "0"
    for z in ("1", "y", b):
        for x in head_right:
            r[("T", x, z)] = "A"
        r[("T", "A", z)] = "H'"
        r[("T", "H'", z)] = "H'"
        r[("A", "H'", z)] = "T"
    # counter cells wait for the head
    for x in ("1", "A", "H'"):
        for z in ("1", "y"):
            r[(x, "1", z)] = "1"
        r[(x, "y", b)] = "y"
    r[("T", "y", b)] = "y"
    # trail of 0s behind the head
    for w in ("0", b):
        for z in ("0", "T", "A"):
            r[(w, "0", z)] = "0"
    r[("0", "0", h)] = "0"
    # blanks
    for x in ("0", "A", "H'", "y", h, b):
        r[(x, b, b)] = b
    r[(b, b, "0")] = b
    # halting: the trigger, then the end marker is wiped and H stays put
    r[("0", "T", "y")] = h
    r[(h, "y", b)] = b
    for z in ("y", b):
        r[("0", h, z)] = h
    return OneDAutomaton(STUB_ALPHABET, b, r, ("0", "T", "y"), "counter stub")


def stub_word(count: int | None) -> list[str]:
    """Initial word: halts after 4*count + 1 steps, runs forever for None.

    Two leading 0s keep a 0 (never a blank) left of the cell that halts.
    """
    if count is None:
        return ["0", "0", "T"]
    return ["0", "0", "T"] + ["1"] * count + ["y"]


def stub_halt_time(count: int) -> int:
    """Step at which the trigger fires (the marker is present from then on)."""
    return 4 * count + 1


# ---------------------------------------------------------------------------


@dataclass
class ComparisonReport:
    horizon: int
    divergences: list[tuple[int, int, str, str]] = field(default_factory=list)
    compared: int = 0

    @property
    def ok(self) -> bool:
        return not self.divergences

    @property
    def first(self) -> tuple[int, int, str, str] | None:
        return self.divergences[0] if self.divergences else None

    def format(self) -> str:
        if self.ok:
            return f"no divergence up to t={self.horizon} ({self.compared} configurations)"
        t, pos, want, got = self.first
        return (f"{len(self.divergences)} divergent cells; first at t={t}, "
                f"position {pos}: 1D run has {want}, track has {got}")


def compare_runs(hyper, spec, m: OneDAutomaton, horizon: int) -> ComparisonReport:
    """Check the track of a hyperbolic trace against the direct 1D run.

    Every 1D symbol is compared on the settled prefix of the track (the cells
    between the origin and the growing front); 1D content past the front is
    itself a divergence.
    """
    from .engine import track_of

    report = ComparisonReport(horizon)
    marker_as = {HALT_MARKER: spec.marker}
    tape = None
    for t, conf in enumerate(hyper.configurations()):
        if t > horizon:
            break
        word = track_of(conf, spec)
        if tape is None:
            tape = Tape(tuple(word), 0, m.blank)
        else:
            tape = step_1d(tape, m)
        report.compared += 1
        for pos in range(max(len(word), tape.end)):
            want = marker_as.get(tape[pos], tape[pos])
            if pos >= len(word) and want == m.blank:
                continue
            got = word[pos] if pos < len(word) else "(beyond front)"
            if want != got:
                report.divergences.append((t, pos, want, got))
    return report
