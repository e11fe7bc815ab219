import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pentaca.automata as automata
from pentaca.automata import (
    BLANK, C_RENAMING, CANCELLED, AutomatonSpec, BuildError, RenameError, b_to_c_map, build,
    build_A, build_C, seed_configuration, initial_configuration, instantiate,
    instantiate_table, lift_track_rule, lifted_rules, load_table, propagation_table, ray_address,
    ray_index, rename_config, support_address,
)
from pentaca.engine import run, track_of
from pentaca.oned import OneDAutomaton, Tape, compare_runs, run_1d, stub_automaton
from pentaca.pentagrid import CENTER, neighbor_table
from pentaca.rules import Rule, RuleTable, parse_table, validate


def has(spec, line):
    r = parse_table(line).rules[0]
    return spec.table.lookup(r.current, r.nbrs) == r.next


def test_propagation_table_contents():
    t = propagation_table()
    assert t.lookup("N", ("W1", "N", "N", "N", "N")) == "W0"
    assert t.lookup("W0", ("N",) * 5) == "N"
    assert not validate(t).conflicts
    assert set(t.alphabet) == {"N", "B", "B0", "W", "W0", "W1"}


def test_lift_examples():
    r = lift_track_rule("_", "_", "A", "_", "T")
    assert (r.current, r.nbrs, r.next, r.flag) == ("_", ("_", "T", "A", "N", "N"), "_", 0)
    # the 9-state table row "B N N B T A B" with B the blank is a rotation of it
    row = instantiate(parse_table("0 B N N B T A B").rules[0], stub_automaton())
    assert len(row) == 1 and row[0].key == r.key and row[0].next == r.next
    q = lift_track_rule("_", "_", "_", "_")
    assert q == Rule(0, "_", ("_", "W", "_", "N", "N"), "_")
    assert lift_track_rule("0", "T", "1", "A").flag == 1


def test_instantiation_policy():
    m = stub_automaton()
    # a support cell watching one track cell: every embedded state
    w = parse_table("0 W B W N N W W").rules[0]
    assert {r.nbrs[0] for r in instantiate(w, m)} == set(m.alphabet)
    # two track neighbors: the ends of the ray, blank only
    two = parse_table("0 B N N B T A B").rules[0]
    assert [r.current for r in instantiate(two, m)] == ["_"]
    # B0 turning into B yields the blank
    b0 = parse_table("2 B0 B W1 N N N B").rules[0]
    assert [str(r) for r in instantiate(b0, m)] == ["2 B0 _ W1 N N N _"]
    # rules without B are kept as they are
    plain = parse_table("1 W0 N N N N N N").rules[0]
    assert instantiate(plain, m) == [plain]


@pytest.mark.parametrize("variant,count", [("A13", 13), ("B12", 12), ("C9", 9)])
def test_state_counts(specs, variant, count):
    spec = specs[variant]
    assert spec.state_count == count and len(spec.embedded.alphabet) == 7
    assert BLANK in spec.table.alphabet
    rep = validate(spec.table)
    assert rep.valid and not rep.conflicts


def test_a13_examples(specs):
    a = specs["A13"]
    assert has(a, "1 W H W N N W H")
    assert has(a, "1 W1 B0 H N N N H")
    assert has(a, "1 T 0 W y N N H")  # the halt trigger, lifted


def test_b12_examples(specs):
    b = specs["B12"]
    for s in b.embedded.alphabet:
        assert has(b, f"1 W {s} W N N N N")
    assert all("H" not in r.symbols for r in b.table.rules)
    assert CANCELLED.renamed({"H": "N"}) not in b.table


def test_c9_examples(specs):
    c = specs["C9"]
    assert has(c, "1 T N N T N T N")
    assert has(c, "0 T 0 0 0 _ _ T")
    assert has(c, "0 T T T T N N T")
    assert set(c.table.alphabet) == {"N", "W1", *c.embedded.alphabet}


def test_b12_contains_shipped_rows(specs):
    b = specs["B12"]
    for name in ("table1.rules", "table3.rules"):
        for r in instantiate_table(load_table(name), b.embedded):
            assert b.table.lookup(r.current, r.nbrs) == r.next, f"{name}: {r}"


def test_c9_contains_shipped_rows(specs):
    # these rows describe the ray before any computation: B is the blank
    c = specs["C9"]
    for name in ("table4.rules", "section6_erase.rules"):
        for r in load_table(name).rules:
            q = r.renamed({"B": c.embedded.blank})
            assert c.table.lookup(q.current, q.nbrs) == q.next, f"{name}: {r}"


def test_a13_contains_shipped_halting_rows(specs):
    a = specs["A13"]
    for name in ("table1.rules", "table2.rules"):
        for r in instantiate_table(load_table(name), a.embedded):
            assert a.table.lookup(r.current, r.nbrs) == r.next, r


def test_c9_contains_renamed_b12(specs):
    b, c = specs["B12"], specs["C9"]
    for r in b.table.rules:
        q = r.renamed(C_RENAMING)
        assert c.table.lookup(q.current, q.nbrs) == q.next, r


def test_cancelled_rule_reinjected_into_b12(specs):
    b = specs["B12"]
    bad = RuleTable(b.table.rules + [CANCELLED.renamed({"H": "N"})], b.table.alphabet)
    rep = validate(bad)
    assert len(rep.conflicts) == 1
    first, second = rep.conflicts[0]
    assert str(first) == "1 N W1 N N N N W0"


def test_build_errors(stub, monkeypatch):
    clash = OneDAutomaton(("_", "W"), "_", {})
    with pytest.raises(BuildError):
        build_A(clash)
    no_t = OneDAutomaton(("_", "0", "A"), "_", {})
    with pytest.raises(BuildError):
        build_C(no_t)
    with pytest.raises(ValueError):
        build("D7", stub)
    extra = Rule(1, "W", ("H", "N", "N", "N", "N"), "W", "injected")
    real = automata.reconstructed_rules
    monkeypatch.setattr(automata, "reconstructed_rules", lambda v, m: real(v, m) + [
        extra, Rule(1, "W", ("N", "H", "N", "N", "N"), "N", "injected")])
    with pytest.raises(BuildError) as e:
        build_A(stub)
    assert e.value.pair is not None and {r.next for r in e.value.pair} == {"W", "N"}


def test_ray_geometry():
    for k in range(30):
        a = ray_address(k)
        assert ray_index(a) == k
        assert ray_address(k + 1) in neighbor_table(a)
        s = support_address(k)
        if s is not None:
            assert s in neighbor_table(a)
    assert support_address(3) == CENTER
    assert ray_index(CENTER) is None
    with pytest.raises(IndexError):
        ray_address(-1)


def test_rename_config_examples():
    c = seed_configuration()
    ident = {s: s for s in c.states()}
    assert rename_config(c, ident).cells == c.cells
    r = rename_config(c, {"W0": "0", "B": "B"})
    assert r.support == c.support
    w0 = [a for a, s in c.cells.items() if s == "W0"]
    assert len(w0) == 1 and r[w0[0]] == "0"
    back = rename_config(r, {"0": "W0", "B": "B"})
    assert back.cells == c.cells
    with pytest.raises(RenameError):
        rename_config(c, {"B": "B"})
    assert rename_config(c, {"B": "_"}, strict=False)[w0[0]] == "W0"


def test_b_to_c_map(specs):
    mp = b_to_c_map(specs["B12"].embedded)
    assert set(mp) == set(specs["B12"].table.alphabet)
    assert set(mp.values()) == set(specs["C9"].table.alphabet)


def test_initial_configuration(specs):
    spec = specs["B12"]
    c = initial_configuration(spec, ["0", "0", "T"])
    assert track_of(c, spec)[:6] == ("_", "_", "_", "0", "0", "T")
    assert "B" not in c.states()
    with pytest.raises(ValueError):
        initial_configuration(spec, ["W"])
    with pytest.raises(ValueError):
        initial_configuration(spec, ["0"] * 5, warmup=2)
    cc = initial_configuration(specs["C9"], ["0", "0", "T"])
    assert not {"W", "W0", "B0"} & cc.states()


# ---------------------------------------------------------------------------
# cross-simulation oracle: a 2-state automaton lifted onto the ray


def two_state():
    rules = {}
    for x in "_1":
        for z in "_1":
            rules[(x, "1", z)] = "1" if x == z else "_"
            rules[(x, "_", z)] = "_"
    return OneDAutomaton(("_", "1"), "_", rules, None, "two-state")


def two_state_spec():
    m = two_state()
    rules = instantiate_table(propagation_table(), m) + lifted_rules(m, ("W",), None)
    table = RuleTable(rules, ["N", "_", "1", "W", "W0", "W1", "B0"]).deduplicated()
    assert validate(table).valid
    return AutomatonSpec("raw", m, table)


def test_two_state_lift_count():
    m = two_state()
    assert len(lifted_rules(m, ("W",), None)) == 8


@settings(max_examples=12, deadline=None)
@given(st.lists(st.sampled_from("_1"), min_size=1, max_size=6))
def test_two_state_cross_simulation(word):
    spec, m = two_state_spec(), two_state()
    c0 = initial_configuration(spec, word)
    trace = run(c0, spec, 30)
    rep = compare_runs(trace, spec, m, 30)
    assert rep.ok, rep.format()
    # and directly: the settled prefix equals the 1D run
    tapes = run_1d(Tape(track_of(c0, spec), 0, "_"), m, 30)
    for t, conf in enumerate(trace.configurations()):
        w = track_of(conf, spec)
        assert tuple(tapes[t].cells(len(w))) == w


def test_blank_track_leaves_tables_as_shipped():
    m = automata.blank_track()
    t1 = load_table("table1.rules")
    assert instantiate_table(t1, m) == t1.rules
