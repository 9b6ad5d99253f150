"""Command line front end.

Exit codes: 0 on success, 1 when the requested check or parse fails
(no parse, validation problems, regressions), 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from .chart import ParserLimits, enumerate_readings, parse
from .figures import render_figures
from .grammar import LoadError, UnknownTagError, esfrag_path, load_grammar
from .metrics import (
    compute_metrics,
    profile_records,
    render_records,
    render_table,
    summary_line,
)
from .morpho import analyze, load_table
from .mrs import extract_mrs, format_mrs, to_dmrs
from .service import make_server
from .treebank import (
    Decision,
    compare_profiles,
    create_profile,
    has_regressions,
    load_decisions,
    load_expectations,
    load_suite,
    open_profile,
    record_decision,
)

OK, FAIL, USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _options(pairs: list[str]) -> dict[str, str]:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"bad --option {pair!r}; expected key=value")
        out[key] = value
    return out


def _load(args) -> tuple:
    g = load_grammar(args.grammar, _options(args.option))
    morph = Path(args.morph) if args.morph else Path(args.grammar) / "morph.tsv"
    table = load_table(morph)
    return g, table


def _limits(args) -> ParserLimits:
    return ParserLimits(max_edges=args.max_edges, timeout=args.timeout)


def _tree(node, indent: int = 0) -> str:
    pad = "  " * indent
    if node.is_leaf:
        return f"{pad}{node.token} [{node.label}/{node.tag}]"
    lines = [f"{pad}({node.label}"] + [_tree(c, indent + 1) for c in node.children]
    return "\n".join(lines) + ")"


def cmd_validate(args) -> int:
    try:
        g, table = _load(args)
    except (LoadError, ValueError, OSError) as err:
        print(f"invalid: {err}")
        return FAIL
    problems = []
    unmapped = sorted(table.tags() - set(g.tagmap))
    if unmapped:
        problems.append(f"morphological tags without a tag mapping: {', '.join(unmapped)}")
    for lemma in sorted(table.lemmas() - set(g.lexicon)):
        print(f"note: lemma {lemma!r} has analyses but no lexical entry")
    for problem in problems:
        print(f"invalid: {problem}")
    if problems:
        return FAIL
    print(
        f"ok: {len(g.hierarchy)} types, {len(g.entries)} entries, "
        f"{len(g.lexrules)} lexical rules, {len(g.phraserules)} phrase rules"
    )
    print(f"version: {g.version}")
    return OK


def cmd_analyze(args) -> int:
    g, table = _load(args)
    lattice = analyze(table, args.sentence)
    for token in lattice.tokens:
        found = next((a for a in lattice.analyses if a.token.start == token.start), None)
        if found is None:
            print(f"{token.surface}\t-")
            continue
        readings = ", ".join(f"{r.lemma}/{r.tag}" for r in found.readings)
        print(f"{token.surface}\t{readings}")
    return OK if not lattice.failures else FAIL


def cmd_parse(args) -> int:
    g, table = _load(args)
    outcome = parse(g, analyze(table, args.sentence), _limits(args))
    readings, truncated = enumerate_readings(outcome.forest, cap=args.cap)
    print(f"status: {outcome.status}")
    if outcome.gaps:
        print(f"gaps: {' '.join(outcome.gaps)}")
    print(f"readings: {len(readings)}{' (truncated)' if truncated else ''}")
    for i, reading in enumerate(readings):
        print(f"-- reading {i}")
        print(_tree(reading.tree))
    return OK if outcome.status == "parsed" else FAIL


def cmd_mrs(args) -> int:
    g, table = _load(args)
    outcome = parse(g, analyze(table, args.sentence), _limits(args))
    readings, _ = enumerate_readings(outcome.forest, cap=args.cap)
    if outcome.status != "parsed":
        print(f"status: {outcome.status}", file=sys.stderr)
        return FAIL
    if args.reading >= len(readings):
        print(f"no reading {args.reading}; found {len(readings)}", file=sys.stderr)
        return FAIL
    m = extract_mrs(readings[args.reading].fs, g.hierarchy)
    print(format_mrs(m))
    if args.dmrs:
        d = to_dmrs(m)
        print(f"top: {d.nodes[d.top].predicate}")
        for link in d.links:
            src, dst = d.nodes[link.start], d.nodes[link.end]
            print(f"{src.predicate} -{link.role}/{link.post}-> {dst.predicate}")
    return OK


def cmd_treebank_run(args) -> int:
    g, table = _load(args)
    items = load_suite(args.suite)
    profile = create_profile(
        args.profile, g, table, items, _limits(args), suite_name=Path(args.suite).stem
    )
    for item_id, result in profile.results.items():
        print(f"{item_id}\t{result.status}\t{len(result.readings)}")
    print(f"profile: {profile.path}")
    return OK


def cmd_treebank_decide(args) -> int:
    profile = open_profile(args.profile)
    if args.batch:
        decisions = load_decisions(args.batch)
    elif args.item is None:
        raise UsageError("either an item id or --batch is required")
    else:
        if (args.accept is None) == (args.reject is False):
            raise UsageError("exactly one of --accept K or --reject is required")
        decision = "accept" if args.accept is not None else "reject"
        decisions = (Decision(args.item, decision, args.accept, args.note),)
    for decision in decisions:
        record_decision(profile, decision)
        print(f"{decision.item_id}\t{decision.decision}")
    return OK


def cmd_treebank_compare(args) -> int:
    current = open_profile(args.profile)
    gold = open_profile(args.against)
    comparisons = compare_profiles(current, gold)
    for c in comparisons:
        print(f"{c.item_id}\t{c.category}")
    counts = Counter(c.category for c in comparisons)
    print("; " + "  ".join(f"{k} {v}" for k, v in sorted(counts.items())))
    failed = has_regressions(comparisons)
    if args.expect:
        expected = load_expectations(args.expect)
        actual = {c.item_id: c.category for c in comparisons}
        for item_id in sorted(set(expected) | set(actual)):
            if expected.get(item_id) != actual.get(item_id):
                print(
                    f"; mismatch {item_id}: expected {expected.get(item_id)}, "
                    f"found {actual.get(item_id)}"
                )
                failed = True
    return FAIL if failed else OK


def cmd_metrics(args) -> int:
    profile = open_profile(args.profile)
    records = profile_records(profile)
    rows = compute_metrics(records)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(render_records(rows) + "\n", encoding="utf-8")
        figures = render_figures(rows, records, out.parent)
        print(f"wrote {out}")
        for figure in figures:
            print(f"wrote {figure}")
    print(render_records(rows) if args.format == "records" else render_table(rows))
    print(summary_line(rows))
    return OK


def cmd_serve(args) -> int:
    server = make_server(
        args.profile,
        host=args.host,
        port=args.port,
        gold_path=args.against,
        ui_dir=args.ui_dir,
        writable=args.writable,
    )
    host, port = server.server_address[:2]
    mode = "writable" if args.writable else "read-only"
    print(f"serving {args.profile} ({mode}) on http://{host}:{port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return OK


def _add_grammar_options(sub) -> None:
    sub.add_argument("--grammar", default=str(esfrag_path()), help="grammar directory")
    sub.add_argument("--morph", default=None, help="morphological table (default: grammar's)")
    sub.add_argument(
        "--option",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="grammar option override, e.g. flag.depictive-vp-mod=off",
    )


def _add_parser_options(sub) -> None:
    sub.add_argument("--max-edges", type=int, default=ParserLimits.max_edges)
    sub.add_argument("--timeout", type=float, default=ParserLimits.timeout)
    sub.add_argument("--cap", type=int, default=50, help="most readings to enumerate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grammarctl",
        description="Parse Spanish fragments, inspect semantics, treebank the results.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a grammar and check its configuration")
    _add_grammar_options(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="morphological readings for a sentence")
    _add_grammar_options(p)
    p.add_argument("sentence")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("parse", help="parse a sentence and print its derivations")
    _add_grammar_options(p)
    _add_parser_options(p)
    p.add_argument("sentence")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("mrs", help="print a reading's semantics")
    _add_grammar_options(p)
    _add_parser_options(p)
    p.add_argument("sentence")
    p.add_argument("--reading", type=int, default=0)
    p.add_argument("--dmrs", action="store_true", help="also print dependency links")
    p.set_defaults(func=cmd_mrs)

    tb = sub.add_parser("treebank", help="profile storage and decisions")
    tb_sub = tb.add_subparsers(dest="subcommand", required=True)

    p = tb_sub.add_parser("run", help="parse a suite into a new profile")
    _add_grammar_options(p)
    _add_parser_options(p)
    p.add_argument("suite")
    p.add_argument("--profile", required=True, help="profile directory to create")
    p.set_defaults(func=cmd_treebank_run)

    p = tb_sub.add_parser("decide", help="record accept/reject decisions")
    p.add_argument("--profile", required=True)
    p.add_argument("item", nargs="?", default=None)
    p.add_argument("--accept", type=int, default=None, metavar="READING")
    p.add_argument("--reject", action="store_true")
    p.add_argument("--note", default="")
    p.add_argument("--batch", default=None, help="decision table to apply")
    p.set_defaults(func=cmd_treebank_decide)

    p = tb_sub.add_parser("compare", help="classify a profile against a gold profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--against", required=True)
    p.add_argument("--expect", default=None, help="expected category table")
    p.set_defaults(func=cmd_treebank_compare)

    p = sub.add_parser("metrics", help="evaluation rates for a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--out", default=None, help="write delimited records (figures go alongside)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("serve", help="HTTP API over a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--against", default=None, help="gold profile for /api/compare")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--ui-dir", default=None, help="static files served at /")
    p.add_argument("--writable", action="store_true", help="allow decision posts")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LoadError, UnknownTagError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE
    except (FileNotFoundError, NotADirectoryError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
