"""The three hyperbolic automata built around an embedded 1D automaton.

The shipped tables write ``B`` for "some state of the embedded automaton".
Building an automaton instantiates that placeholder, adds the lifted track
rules ``y | x S z N N -> u`` for every embedded rule ``x y z -> u``, and then
applies the halting transformations: the 13-state automaton keeps a halting
state ``H``, the 12-state one folds ``H`` into the blank ``N``, and the 9-state
one additionally renames ``W, W0, B0`` to the embedded symbols ``T, 0, A``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

from .oned import HALT_MARKER, OneDAutomaton
from .pentagrid import CENTER, CellAddress
from .rules import Rule, RuleTable, parse_table, validate

BLANK = "N"
GENERIC = "B"
SCAFFOLD = ("W", "W0", "W1", "B0")
C_RENAMING = {"W": "T", "W0": "0", "B0": "A"}
CANCELLED = Rule(0, "N", ("H", "N", "N", "N", "W1"), "N")

VARIANTS = ("A13", "B12", "C9", "raw")


class BuildError(ValueError):
    def __init__(self, message: str, pair: tuple[Rule, Rule] | None = None):
        super().__init__(message)
        self.pair = pair


class RenameError(KeyError):
    pass


def data_text(name: str) -> str:
    return resources.files("pentaca").joinpath("data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_table(name: str) -> RuleTable:
    """One of the shipped tables, e.g. ``table1.rules``."""
    return parse_table(data_text(name), name)


def propagation_table() -> RuleTable:
    return load_table("table1.rules")


def blank_track() -> OneDAutomaton:
    """Trivial embedded automaton whose only symbol is the placeholder ``B``.

    Building over it leaves the shipped tables literally as shipped.
    """
    return OneDAutomaton((GENERIC,), GENERIC, {}, None, "blank track")


# ---------------------------------------------------------------------------
# Ray geometry: the track runs p0, p1, ... from the origin outward.
# p0 = 1:1 and p1 = 1:1.0 are the seed cells; p2 = 1:0, p3 = root of sector 0,
# then the black branch 0:0, 0:0.0, ...  Track cell p_k for k >= 2 is watched
# by one support cell: 1: for p2, the center for p3, then 4:, 4:2, 4:2.2, ...


def ray_address(k: int) -> CellAddress:
    if k < 0:
        raise IndexError(k)
    if k == 0:
        return CellAddress(1, (1,))
    if k == 1:
        return CellAddress(1, (1, 0))
    if k == 2:
        return CellAddress(1, (0,))
    return CellAddress(0, (0,) * (k - 3))


def support_address(k: int) -> CellAddress | None:
    """Support cell of track cell p_k (p0 and p1 have none)."""
    if k < 2:
        return None
    if k == 2:
        return CellAddress(1, ())
    if k == 3:
        return CENTER
    return CellAddress(4, (2,) * (k - 4))


def ray_index(a: CellAddress) -> int | None:
    if a.sector == 1 and a.path in ((1,), (1, 0), (0,)):
        return {(1,): 0, (1, 0): 1, (0,): 2}[a.path]
    if a.sector == 0 and all(i == 0 for i in a.path):
        return len(a.path) + 3
    return None


# ---------------------------------------------------------------------------


def lift_track_rule(x: str, y: str, z: str, u: str, support: str = "W", flag: int | None = None,
                    origin: str = "lifted") -> Rule:
    """Rule of a track cell whose embedded rule is ``x y z -> u``."""
    if flag is None:
        flag = 0 if u == y else 1
    return Rule(flag, y, (x, support, z, BLANK, BLANK), u, origin)


def instantiate(rule: Rule, m: OneDAutomaton) -> list[Rule]:
    """Replace the placeholder ``B`` by embedded states.

    A cell in ``B`` is itself a track cell only at the ends of the ray or next
    to the front, where the embedded word is blank; interior track cells get
    their rules from :func:`lift_track_rule`.  So every ``B`` becomes the
    embedded blank, except a single ``B`` seen by a support cell (``W``,
    ``H``) or a blank cell: that one watches an arbitrary track cell and
    ranges over the alphabet.  Signal cells (``W0``, ``W1``, ``B0``) live at
    the front, and the neighbor of a freshly created ``B0`` is the front.
    """
    nb = rule.nbrs.count(GENERIC)
    if GENERIC not in rule.symbols:
        return [rule]
    generic = (nb == 1 and rule.current in (BLANK, "W", HALT_MARKER)
               and rule.next not in (GENERIC, "B0"))
    values = m.alphabet if generic else (m.blank,)
    out = []
    for v in values:
        r = rule.renamed({GENERIC: v}, f"{rule.origin}[B={v}]" if generic else rule.origin)
        out.append(r)
    return out


def instantiate_table(table: RuleTable, m: OneDAutomaton) -> list[Rule]:
    return [r for rule in table.rules for r in instantiate(rule, m)]


def lifted_rules(m: OneDAutomaton, supports: Iterable[str], trigger_next: str | None) -> list[Rule]:
    out = []
    for s in supports:
        for (x, y, z), u in m.ordinary_rules():
            out.append(lift_track_rule(x, y, z, u, s, origin=f"lift {x}{y}{z}->{u} /{s}"))
    if m.halt_trigger is not None and trigger_next is not None:
        x, y, z = m.halt_trigger
        out.append(lift_track_rule(x, y, z, trigger_next, "W", flag=1, origin=f"halt {x}{y}{z}"))
    return out


def reconstructed_rules(variant: str, m: OneDAutomaton) -> list[Rule]:
    """Rules for the exceptional cells that the shipped tables leave out."""
    text = data_text("reconstructed.rules")
    out = []
    section = None
    for line in text.splitlines():
        head = line.split("--", 1)[0].strip()
        if head.startswith("@variant"):
            section = head.split()[1:]
            continue
        if not head or section is None or variant not in section:
            continue
        toks = head.split()
        rule = Rule(int(toks[0]), toks[1], tuple(toks[2:7]), toks[7], "reconstructed")
        out.extend(instantiate(rule, m))
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AutomatonSpec:
    variant: str
    embedded: OneDAutomaton
    table: RuleTable
    marker: str | None = None          # what the halt marker looks like on the track
    front: str = "B0"                  # state of the cell that extends the ray
    renaming: Mapping[str, str] = field(default_factory=dict)

    @property
    def state_count(self) -> int:
        return len(self.table.alphabet)

    @property
    def blank(self) -> str:
        return self.table.blank

    @property
    def track_symbols(self) -> frozenset[str]:
        syms = set(self.embedded.alphabet)
        if self.marker is not None:
            syms.add(self.marker)
        return frozenset(syms)


def _finish(variant: str, m: OneDAutomaton, rules: list[Rule], alphabet: list[str], **kw) -> AutomatonSpec:
    table = RuleTable(rules, alphabet, BLANK).deduplicated()
    report = validate(table)
    if report.conflicts:
        a, b = report.conflicts[0]
        raise BuildError(f"{variant}: {len(report.conflicts)} conflicting rule pairs; first: "
                         f"{a} [{a.origin}] vs {b} [{b.origin}]", (a, b))
    if report.missing_quiescence:
        raise BuildError(f"{variant}: quiescence rule missing")
    return AutomatonSpec(variant, m, table, **kw)


def _check_embedded(m: OneDAutomaton):
    clash = set(m.alphabet) & {BLANK, *SCAFFOLD, HALT_MARKER}
    if clash:
        raise BuildError(f"embedded alphabet reuses scaffold symbols {sorted(clash)}")


def raw_spec(table: RuleTable, embedded: OneDAutomaton | None = None) -> AutomatonSpec:
    """Wrap a plain table (e.g. the propagation table) for the engine."""
    return AutomatonSpec("raw", embedded or blank_track(), table)


def a_rules(m: OneDAutomaton) -> list[Rule]:
    rules = instantiate_table(load_table("table1.rules"), m)
    rules += instantiate_table(load_table("table2.rules"), m)
    rules += lifted_rules(m, ("W", HALT_MARKER), HALT_MARKER)
    rules += reconstructed_rules("A13", m)
    return rules


def build_A(embedded: OneDAutomaton) -> AutomatonSpec:
    _check_embedded(embedded)
    alphabet = [BLANK, *embedded.alphabet, *SCAFFOLD, HALT_MARKER]
    return _finish("A13", embedded, a_rules(embedded), alphabet, marker=HALT_MARKER, front="B0")


def b_rules(m: OneDAutomaton) -> list[Rule]:
    to_n = {HALT_MARKER: BLANK}
    out = []
    for r in a_rules(m):
        if r == CANCELLED:
            continue
        out.append(r.renamed(to_n, r.origin + " H->N"))
    # the shipped halting rules of the 12-state automaton; one of them has no
    # counterpart among the 13-state rules
    out += instantiate_table(load_table("table3.rules"), m)
    out += reconstructed_rules("B12", m)
    return out


def build_B(embedded: OneDAutomaton) -> AutomatonSpec:
    _check_embedded(embedded)
    alphabet = [BLANK, *embedded.alphabet, *SCAFFOLD]
    return _finish("B12", embedded, b_rules(embedded), alphabet, marker=BLANK, front="B0")


def c_rules(m: OneDAutomaton) -> list[Rule]:
    out = [r.renamed(C_RENAMING, r.origin + " renamed") for r in b_rules(m)]
    out.append(lift_track_rule("T", "T", "T", "T", "T", origin="TTT->T"))
    out += instantiate_table(load_table("section6_erase.rules"), m)
    out += reconstructed_rules("C9", m)
    return out


def build_C(embedded: OneDAutomaton) -> AutomatonSpec:
    _check_embedded(embedded)
    missing = {"T", "0", "A"} - set(embedded.alphabet)
    if missing:
        raise BuildError(f"the 9-state construction needs embedded symbols {sorted(missing)}")
    alphabet = [BLANK, *embedded.alphabet, "W1"]
    return _finish("C9", embedded, c_rules(embedded), alphabet, marker=BLANK, front="A",
                   renaming=dict(C_RENAMING))


BUILDERS = {"A13": build_A, "B12": build_B, "C9": build_C}


def build(variant: str, embedded: OneDAutomaton) -> AutomatonSpec:
    try:
        return BUILDERS[variant](embedded)
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}; expected one of {sorted(BUILDERS)}") from None


# ---------------------------------------------------------------------------


def rename_config(c, mapping: Mapping[str, str], strict: bool = True):
    """Pointwise renaming of a configuration; unmapped symbols are an error
    unless ``strict`` is off, in which case they are kept."""
    from .engine import Configuration

    out = {}
    for a, s in c.cells.items():
        if s in mapping:
            out[a] = mapping[s]
        elif strict:
            raise RenameError(f"no image for state {s!r} at {a}")
        else:
            out[a] = s
    blank = mapping.get(c.blank, c.blank)
    return Configuration(out, c.time, blank)


def b_to_c_map(m: OneDAutomaton) -> dict[str, str]:
    """Total renaming from the 12-state alphabet to the 9-state one."""
    mp = {s: s for s in (BLANK, "W1", *m.alphabet)}
    mp.update(C_RENAMING)
    return mp


# ---------------------------------------------------------------------------


def seed_configuration():
    """Seed of the ray, in the shipped tables' symbols (placeholder ``B``)."""
    from .engine import parse_init

    return parse_init(data_text("fig1.init"), BLANK)


def spec_symbols(spec: AutomatonSpec) -> dict[str, str]:
    """Map from the shipped propagation symbols to the automaton's own."""
    mp = {GENERIC: spec.embedded.blank}
    mp.update(spec.renaming)
    return mp


def initial_configuration(spec: AutomatonSpec, word=(), lead: int = 3, warmup: int | None = None):
    """Grow the bare ray for ``warmup`` steps, then write ``word`` on the track.

    The word starts at track position ``lead``; the default warm-up leaves a
    few blank cells between the word and the front.
    """
    from .engine import check_lead, rename_states, run

    word = list(word)
    if warmup is None:
        warmup = 2 * (lead + len(word)) + 4 if word else 0
    c = seed_configuration()
    if warmup:
        c = run(c, raw_spec(propagation_table()), warmup).final
    c = rename_states(c, spec_symbols(spec))
    length = sum(1 for k in range(lead + len(word) + 8) if c[ray_address(k)] != BLANK)
    if lead + len(word) >= length:
        raise ValueError(f"warm-up {warmup} leaves a track of {length} cells, "
                         f"too short for {lead} + {len(word)}")
    for i, s in enumerate(word):
        if s not in spec.embedded.alphabet:
            raise ValueError(f"{s!r} is not an embedded symbol")
        c.cells[ray_address(lead + i)] = s
    c.cells = {a: s for a, s in c.cells.items() if s != BLANK}
    c.time = 0
    check_lead(c, spec)
    return c
