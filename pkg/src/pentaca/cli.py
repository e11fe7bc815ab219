"""Command-line workflows: validate, run, compare, bisim, render.

Exit codes: 0 ok, 1 semantic failure, 2 input error, 3 missing rule.

A manifest is flat ``key = value`` text (``#`` comments).  Relative paths are
resolved against the manifest's directory; ``pkg:NAME`` names a shipped data
file.  Keys::

    variant     A13 | B12 | C9 | raw
    rules       rule-table path(s), comma separated (required for raw)
    embedded    1D automaton file, or 'stub' for the built-in counter stub
    init        initial-configuration file
    word        embedded word to lay on a warmed-up ray (instead of init)
    lead        track position of the word's first symbol (default 3)
    warmup      steps of bare propagation before the word is written
    max_steps   step budget (default 100)
    checkpoint  dump every k-th configuration to trace_out (0 = off)
    trace_out   directory for checkpoint dumps
    svg_out     directory for rendered SVGs
    svg_radius  level cutoff for pictures (default 4)
    svg_size    canvas size in pixels (default 600)
    palette     palette file, state=#rrggbb lines
    strict      true | false (false: a cell without a rule keeps its state)
    drop        rules removed from the table, ';' separated
    patch       rules overriding the table, ';' separated
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import automata, engine, oned, rules
from .pentagrid import RegionGraph, disk

OK, FAILURE, INPUT_ERROR, MISSING_RULE = 0, 1, 2, 3


class InputError(Exception):
    pass


KEYS = {"variant", "rules", "embedded", "init", "word", "lead", "warmup", "max_steps", "checkpoint",
        "trace_out", "svg_out", "svg_radius", "svg_size", "palette", "strict", "drop", "patch"}


@dataclass
class RunManifest:
    variant: str = "raw"
    rules: list[Path] = field(default_factory=list)
    embedded: str | Path | None = None
    init: Path | None = None
    word: list[str] | None = None
    lead: int = 3
    warmup: int | None = None
    max_steps: int = 100
    checkpoint: int = 0
    trace_out: Path | None = None
    svg_out: Path | None = None
    svg_radius: int = 4
    svg_size: int = 600
    palette: Path | None = None
    strict: bool = True
    drop: list[str] = field(default_factory=list)
    patch: list[str] = field(default_factory=list)


def _resolve(value: str, base: Path) -> Path:
    if value.startswith("pkg:"):
        p = Path(str(resources.files("pentaca").joinpath("data").joinpath(value[4:])))
    else:
        p = Path(value)
        if not p.is_absolute():
            p = base / p
    if not p.exists():
        raise InputError(f"no such file: {value}")
    return p


def parse_manifest(text: str, base: Path = Path(".")) -> RunManifest:
    m = RunManifest()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in KEYS:
            raise InputError(f"manifest line {lineno}: unknown or malformed entry {line!r}")
        try:
            if key == "variant":
                if value not in automata.VARIANTS:
                    raise InputError(f"variant must be one of {automata.VARIANTS}")
                m.variant = value
            elif key == "rules":
                m.rules = [_resolve(v.strip(), base) for v in value.split(",") if v.strip()]
            elif key == "embedded":
                m.embedded = "stub" if value == "stub" else _resolve(value, base)
            elif key in ("init", "palette"):
                setattr(m, key, _resolve(value, base))
            elif key in ("trace_out", "svg_out"):
                setattr(m, key, base / value)
            elif key == "word":
                m.word = value.split()
            elif key in ("lead", "warmup", "max_steps", "checkpoint", "svg_radius", "svg_size"):
                setattr(m, key, int(value))
            elif key == "strict":
                if value.lower() not in ("true", "false"):
                    raise InputError("strict must be true or false")
                m.strict = value.lower() == "true"
            elif key in ("drop", "patch"):
                setattr(m, key, [v.strip() for v in value.split(";") if v.strip()])
        except ValueError as exc:
            raise InputError(f"manifest line {lineno}: {exc}") from None
    if m.variant == "raw" and not m.rules:
        raise InputError("variant raw needs a rules path")
    if m.init is not None and m.word is not None:
        raise InputError("give either init or word, not both")
    return m


def load_manifest(path: str | Path) -> RunManifest:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read manifest: {exc}") from None
    return parse_manifest(text, p.parent)


def _rule_from_text(text: str) -> rules.Rule:
    table = rules.parse_table(text, "<manifest>")
    if len(table.rules) != 1:
        raise InputError(f"expected one rule, got {text!r}")
    return table.rules[0]


def embedded_of(m: RunManifest) -> oned.OneDAutomaton | None:
    if m.embedded is None:
        return None
    if m.embedded == "stub":
        return oned.stub_automaton()
    return oned.parse_oned(Path(m.embedded).read_text(encoding="utf-8"), Path(m.embedded).name)


def spec_of(m: RunManifest) -> automata.AutomatonSpec:
    emb = embedded_of(m)
    if m.variant == "raw":
        parts = [rules.parse_table(p.read_text(encoding="utf-8"), p.name) for p in m.rules]
        table = rules.RuleTable([r for t in parts for r in t.rules], None, parts[0].blank)
        spec = automata.raw_spec(table, emb)
    else:
        if emb is None:
            raise InputError(f"variant {m.variant} needs an embedded automaton")
        spec = automata.build(m.variant, emb)
    if m.drop or m.patch:
        dropped = [_rule_from_text(t) for t in m.drop]
        patched = [_rule_from_text(t) for t in m.patch]
        keys = {r.key for r in dropped} | {r.key for r in patched}
        kept = [r for r in spec.table.rules if r.key not in keys]
        table = rules.RuleTable(patched + kept, spec.table.alphabet, spec.table.blank)
        spec = automata.AutomatonSpec(spec.variant, spec.embedded, table, spec.marker, spec.front,
                                      spec.renaming)
    return spec


def initial_of(m: RunManifest, spec: automata.AutomatonSpec) -> engine.Configuration:
    if m.init is not None:
        return engine.load_init(m.init.read_text(encoding="utf-8"), spec, spec.blank)
    if m.word is not None:
        return automata.initial_configuration(spec, m.word, m.lead, m.warmup)
    c = automata.seed_configuration()
    return engine.rename_states(c, automata.spec_symbols(spec))


def trace_of(m: RunManifest, spec, c0, steps: int | None = None) -> engine.Trace:
    return engine.run(c0, spec, steps or m.max_steps, RegionGraph(), m.strict, m.checkpoint)


# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        table = rules.parse_table(Path(args.rules).read_text(encoding="utf-8"), Path(args.rules).name)
    except OSError as exc:
        raise InputError(str(exc)) from None
    report = rules.validate(table)
    print(f"{args.rules}: {len(table.rules)} rules, {len(table.alphabet)} states")
    print(report.format())
    # partial tables lack the quiescence rule; only conflicts fail the check
    return FAILURE if report.conflicts else OK


def cmd_run(args) -> int:
    m = load_manifest(args.manifest)
    if args.max_steps:
        m.max_steps = args.max_steps
    spec = spec_of(m)
    c0 = initial_of(m, spec)
    trace = trace_of(m, spec, c0)
    if m.trace_out is not None and m.checkpoint:
        m.trace_out.mkdir(parents=True, exist_ok=True)
        for t, conf in sorted(trace.checkpoints.items()):
            (m.trace_out / f"t{t:04d}.init").write_text(conf.dump(), encoding="utf-8")
    final = trace.final
    print(f"variant {spec.variant}: {spec.state_count} states, {len(spec.table.rules)} rules")
    if trace.halted_at is None:
        print(f"no halt within budget ({m.max_steps} steps); final support {len(final)} cells")
    else:
        print(f"halted_at {trace.halted_at}; final support {len(final)} cells, "
              f"states {' '.join(sorted(final.states()))}")
    return OK


def cmd_compare(args) -> int:
    m = load_manifest(args.manifest)
    spec = spec_of(m)
    if spec.embedded is None:
        raise InputError("compare needs an embedded automaton")
    c0 = initial_of(m, spec)
    trace = trace_of(m, spec, c0, max(args.horizon, 1))
    report = oned.compare_runs(trace, spec, spec.embedded, args.horizon)
    print(report.format())
    return OK if report.ok else FAILURE


def first_mismatch(c1, c2):
    for a in sorted(c1.cells.keys() | c2.cells.keys(), key=engine._addr_key):
        if c1[a] != c2[a]:
            return a, c1[a], c2[a]
    return None


def cmd_bisim(args) -> int:
    mb, mc = load_manifest(args.manifest_b), load_manifest(args.manifest_c)
    sb, sc = spec_of(mb), spec_of(mc)
    cb0, cc0 = initial_of(mb, sb), initial_of(mc, sc)
    mapping = automata.b_to_c_map(sb.embedded)
    horizon = max(args.horizon, 1)
    tb = trace_of(mb, sb, cb0, horizon)
    tc = trace_of(mc, sc, cc0, horizon)
    for t, (x, y) in enumerate(zip(tb.configurations(), tc.configurations())):
        if t > args.horizon:
            break
        try:
            xr = automata.rename_config(x, mapping)
        except automata.RenameError as exc:
            print(f"t={t}: {exc}")
            return FAILURE
        if not engine.equal(xr, y):
            a, s1, s2 = first_mismatch(xr, y)
            print(f"divergence at t={t}, cell {a}: renamed {s1} vs {s2}")
            return FAILURE
    hb = tb.halted_at if tb.halted_at is not None and tb.halted_at <= args.horizon else None
    hc = tc.halted_at if tc.halted_at is not None and tc.halted_at <= args.horizon else None
    if hb != hc:
        print(f"halting differs: {hb} vs {hc}")
        return FAILURE
    print(f"renaming-equivalent up to t={args.horizon}; halted_at {hb}")
    return OK


def parse_times(items: list[str]) -> list[int]:
    out: list[int] = []
    for it in items:
        for part in it.split(","):
            part = part.strip()
            if not part:
                continue
            lo, sep, hi = part.partition("-")
            try:
                if sep:
                    out.extend(range(int(lo), int(hi) + 1))
                else:
                    out.append(int(part))
            except ValueError:
                raise InputError(f"bad time {part!r}") from None
    if any(t < 0 for t in out):
        raise InputError("times are non-negative")
    return sorted(set(out))


def cmd_render(args) -> int:
    from .render import DEFAULT_PALETTE, Palette, render_svg

    m = load_manifest(args.manifest)
    times = parse_times(args.times)
    out_dir = Path(args.out) if args.out else m.svg_out
    if out_dir is None:
        raise InputError("no output directory (svg_out or --out)")
    if not times:
        return OK
    spec = spec_of(m)
    c0 = initial_of(m, spec)
    horizon = max(times)
    trace = trace_of(m, spec, c0, horizon) if horizon else engine.Trace(c0)
    if horizon > trace.length:
        raise InputError(f"time {horizon} is beyond the trace (halted at {trace.halted_at})")
    palette = DEFAULT_PALETTE
    if m.palette is not None:
        palette = Palette.parse(m.palette.read_text(encoding="utf-8"), DEFAULT_PALETTE)
    region = disk(m.svg_radius)
    out_dir.mkdir(parents=True, exist_ok=True)
    for t in times:
        svg = render_svg(trace.at(t), region, palette, m.svg_size, m.svg_radius, title=f"t={t}")
        (out_dir / f"t{t:04d}.svg").write_text(svg, encoding="utf-8")
    print(f"wrote {len(times)} file(s) to {out_dir}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pentaca", description="Rotation-invariant cellular automata on the pentagrid.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a rule table for rotation conflicts")
    s.add_argument("rules")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("run", help="run a manifest until halt or budget")
    s.add_argument("manifest")
    s.add_argument("--max-steps", type=int, default=0)
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("compare", help="compare the track with the direct 1D run")
    s.add_argument("manifest")
    s.add_argument("--horizon", type=int, default=100)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("bisim", help="check the 12-/9-state renaming bisimulation")
    s.add_argument("manifest_b")
    s.add_argument("manifest_c")
    s.add_argument("--horizon", type=int, default=200)
    s.set_defaults(func=cmd_bisim)

    s = sub.add_parser("render", help="write t{NNNN}.svg pictures")
    s.add_argument("manifest")
    s.add_argument("--times", nargs="*", default=[], help="e.g. 0-7 or 0,2,5")
    s.add_argument("--out")
    s.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except rules.MissingRule as exc:
        print(f"missing rule: {exc}", file=sys.stderr)
        print(f"  current {exc.current}; neighbors {' '.join(exc.nbrs)}", file=sys.stderr)
        return MISSING_RULE
    except (InputError, rules.ParseError, automata.BuildError, engine.StructureError, ValueError,
            OSError) as exc:
        # BuildError and StructureError are semantic, the rest input errors
        if isinstance(exc, (automata.BuildError, engine.StructureError)):
            print(f"error: {exc}", file=sys.stderr)
            return FAILURE
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
