"""Rotation-invariant rule tables.

Text format, one rule per line::

    @states N W B ...      (optional; makes unknown symbols an error)
    @blank N               (optional; defaults to N)
    -- comment to end of line
    flag  e0  e1 e2 e3 e4 e5  e6

``e0`` is the current state, ``e1..e5`` the neighbors seen through sides 1..5
counter-clockwise, ``e6`` the new state.  Flag 0 keeps the state, 1 and 2
change it; the flag is metadata only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

Key = tuple[str, tuple[str, ...]]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class MissingRule(LookupError):
    """No rule for a neighborhood; carries enough context to transcribe one."""

    def __init__(self, current: str, nbrs: Sequence[str], cell=None, time: int | None = None):
        self.current = current
        self.nbrs = tuple(nbrs)
        self.cell = cell
        self.time = time
        where = ""
        if cell is not None:
            where = f" at cell {cell}"
        if time is not None:
            where += f" (step {time} -> {time + 1})"
        super().__init__(f"no rule for {current} | {' '.join(self.nbrs)}{where}")


@dataclass(frozen=True)
class Rule:
    flag: int
    current: str
    nbrs: tuple[str, ...]
    next: str
    origin: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.nbrs) != 5:
            raise ValueError("a rule has exactly 5 neighbors")

    @property
    def key(self) -> Key:
        return (self.current, canonical_rotation(self.nbrs))

    @property
    def symbols(self) -> set[str]:
        return {self.current, self.next, *self.nbrs}

    def renamed(self, mapping: Mapping[str, str], origin: str | None = None) -> "Rule":
        m = lambda s: mapping.get(s, s)  # noqa: E731
        return Rule(self.flag, m(self.current), tuple(m(s) for s in self.nbrs), m(self.next),
                    self.origin if origin is None else origin)

    def line(self) -> str:
        cols = [str(self.flag), self.current, *self.nbrs, self.next]
        return "  ".join(f"{c:<3}" for c in cols).rstrip()

    def __str__(self) -> str:
        return " ".join([str(self.flag), self.current, *self.nbrs, self.next])


def rotations(nbrs: Sequence[str]) -> list[tuple[str, ...]]:
    t = tuple(nbrs)
    return [t[k:] + t[:k] for k in range(len(t))]


def canonical_rotation(nbrs: Sequence[str]) -> tuple[str, ...]:
    """Lexicographically least rotation (symbol names compared as strings)."""
    return min(rotations(nbrs))


@dataclass
class ValidationReport:
    conflicts: list[tuple[Rule, Rule]] = field(default_factory=list)
    duplicates: list[tuple[Rule, Rule]] = field(default_factory=list)
    missing_quiescence: bool = False
    flag_warnings: list[Rule] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.conflicts and not self.missing_quiescence

    def format(self) -> str:
        out = [f"rules conflicting: {len(self.conflicts)}",
               f"duplicate rules:   {len(self.duplicates)}",
               f"quiescence rule:   {'missing' if self.missing_quiescence else 'present'}"]
        for a, b in self.conflicts:
            out.append(f"CONFLICT  {a}   [{a.origin}]")
            out.append(f"     vs   {b}   [{b.origin}]")
        for a, b in self.duplicates:
            out.append(f"duplicate {a}   [{a.origin}] ~ [{b.origin}]")
        for r in self.flag_warnings:
            out.append(f"flag mismatch: {r}   [{r.origin}]")
        return "\n".join(out)


class RuleTable:
    """Rules indexed by (current, canonical rotation of neighbors).

    On a conflicting key the first rule wins in the index; :func:`validate`
    reports the conflict.
    """

    def __init__(self, rules: Iterable[Rule], alphabet: Iterable[str] | None = None, blank: str = "N"):
        self.rules: list[Rule] = list(rules)
        syms: set[str] = set()
        for r in self.rules:
            syms |= r.symbols
        if alphabet is None:
            self.alphabet = tuple(sorted(syms | {blank}))
        else:
            self.alphabet = tuple(alphabet)
            unknown = syms - set(self.alphabet)
            if unknown:
                raise ValueError(f"symbols outside the alphabet: {sorted(unknown)}")
        if blank not in self.alphabet:
            raise ValueError(f"blank {blank!r} is not in the alphabet")
        self.blank = blank
        self.index: dict[Key, str] = {}
        for r in self.rules:
            self.index.setdefault(r.key, r.next)

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, rule: Rule) -> bool:
        return self.index.get(rule.key) == rule.next

    def lookup(self, current: str, nbrs: Sequence[str]) -> str | None:
        return self.index.get((current, canonical_rotation(nbrs)))

    def without(self, dropped: Iterable[Rule]) -> "RuleTable":
        keys = {(r.key, r.next) for r in dropped}
        return RuleTable([r for r in self.rules if (r.key, r.next) not in keys], self.alphabet, self.blank)

    def deduplicated(self) -> "RuleTable":
        seen: set[tuple[Key, str]] = set()
        out = []
        for r in self.rules:
            k = (r.key, r.next)
            if k not in seen:
                seen.add(k)
                out.append(r)
        return RuleTable(out, self.alphabet, self.blank)

    def renamed(self, mapping: Mapping[str, str], origin_suffix: str = "") -> "RuleTable":
        rules = [r.renamed(mapping, r.origin + origin_suffix) for r in self.rules]
        alphabet = []
        for s in self.alphabet:
            t = mapping.get(s, s)
            if t not in alphabet:
                alphabet.append(t)
        return RuleTable(rules, alphabet, mapping.get(self.blank, self.blank))


def match(table: RuleTable, current: str, nbrs: Sequence[str], strict: bool = True) -> str:
    nxt = table.lookup(current, nbrs)
    if nxt is None:
        if strict:
            raise MissingRule(current, nbrs)
        return current
    return nxt


def validate(table: RuleTable) -> ValidationReport:
    report = ValidationReport()
    first: dict[Key, Rule] = {}
    for r in table.rules:
        prev = first.get(r.key)
        if prev is None:
            first[r.key] = r
        elif prev.next != r.next:
            report.conflicts.append((prev, r))
        else:
            report.duplicates.append((prev, r))
        if (r.flag == 0) != (r.current == r.next):
            report.flag_warnings.append(r)
    b = table.blank
    report.missing_quiescence = table.index.get((b, (b,) * 5)) != b
    return report


def parse_table(text: str, name: str = "<rules>") -> RuleTable:
    declared: list[str] | None = None
    blank = "N"
    rules: list[Rule] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            head, *args = line.split()
            if head == "@states":
                if not args:
                    raise ParseError("@states needs at least one symbol", lineno)
                if len(set(args)) != len(args):
                    raise ParseError("repeated symbol in @states", lineno)
                declared = args
            elif head == "@blank":
                if len(args) != 1:
                    raise ParseError("@blank takes one symbol", lineno)
                blank = args[0]
            else:
                raise ParseError(f"unknown directive {head}", lineno)
            continue
        toks = line.split()
        if len(toks) != 8:
            raise ParseError(f"expected 8 columns (flag e0..e6), got {len(toks)}", lineno)
        try:
            flag = int(toks[0])
        except ValueError:
            raise ParseError(f"flag must be 0, 1 or 2, got {toks[0]!r}", lineno) from None
        if flag not in (0, 1, 2):
            raise ParseError(f"flag must be 0, 1 or 2, got {flag}", lineno)
        if declared is not None:
            for t in toks[1:]:
                if t not in declared:
                    raise ParseError(f"unknown symbol {t!r}", lineno)
        rules.append(Rule(flag, toks[1], tuple(toks[2:7]), toks[7], f"{name}:{lineno}"))
    if not rules:
        raise ParseError(f"{name}: no rules (a table needs at least the quiescence rule)")
    if declared is not None and blank not in declared:
        raise ParseError(f"blank {blank!r} not among declared states")
    return RuleTable(rules, declared, blank)


def serialize(table: RuleTable, header: bool = True) -> str:
    lines = []
    if header:
        lines.append("@states " + " ".join(table.alphabet))
        lines.append(f"@blank {table.blank}")
    lines.extend(r.line() for r in table.rules)
    return "\n".join(lines) + "\n"
