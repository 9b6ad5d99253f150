"""Acceptance gate: one test (and one printed PASS line) per shipped guarantee.

Each test states its tolerance inline and prints a single summary line so a
verbose run reads as a checklist. Oracles are independent implementations:
the GLB check enumerates descendant sets, the unification minimality check
enumerates one-step generalizations of the result, and the parser check
re-derives readings with the brute-force enumerator.
"""

from __future__ import annotations

import random
import time

import pytest
from test_hierarchy import brute_force_glb
from test_mrs import rename_variables

from grammarctl.chart import enumerate_readings, oracle_parse, parse
from grammarctl.cli import main
from grammarctl.fstruct import (
    CycleError,
    FeatureStructure,
    UnifyFailure,
    isomorphic,
    subsumes,
    unify,
)
from grammarctl.hierarchy import is_string_type
from grammarctl.grammar import esfrag_path, load_grammar
from grammarctl.metrics import ItemRecord, compute_metrics, profile_records
from grammarctl.morpho import analyze, tokenize
from grammarctl.mrs import canonicalize, check_wellformed, extract_mrs, format_mrs, to_dmrs

SUITES = esfrag_path() / "suites"


def suite_rows() -> list[tuple[str, str, str, int]]:
    rows = []
    for line in (SUITES / "phenomena.tsv").read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith(";"):
            continue
        item_id, sentence, status, readings = line.split("\t")
        rows.append((item_id, sentence, status, int(readings)))
    return rows


# -- random feature structures over the shipped hierarchy ------------------


def _fs_from(nodes: dict[int, tuple[str, dict[str, int]]], root: int) -> FeatureStructure:
    return FeatureStructure.build({k: (t, dict(f)) for k, (t, f) in nodes.items()}, root)


def _node_dict(fs: FeatureStructure) -> dict[int, tuple[str, dict[str, int]]]:
    return {nid: (t, feats) for nid, t, feats in fs.nodes()}


def random_fs(h, rng: random.Random, types: list[str], feats: list[str]) -> FeatureStructure:
    n = rng.randint(1, 6)
    nodes = {i: (rng.choice(types), {}) for i in range(n)}
    for child in range(1, n):
        parent = rng.randrange(child)
        t, fdict = nodes[parent]
        fdict[rng.choice(feats)] = child
    # occasional forward reentrancy keeps the graph acyclic by construction
    if n > 2 and rng.random() < 0.5:
        a, b = sorted(rng.sample(range(n), 2))
        t, fdict = nodes[a]
        fdict[rng.choice(feats)] = b
    return _fs_from(nodes, 0)


def generalized(h, fs: FeatureStructure, rng: random.Random, feats: list[str]) -> FeatureStructure:
    """A random structure that subsumes ``fs`` (raise types, drop edges)."""
    nodes = _node_dict(fs)
    out: dict[int, tuple[str, dict[str, int]]] = {}
    for nid, (t, fdict) in nodes.items():
        if rng.random() < 0.6:
            above = sorted(h.ancestors(t) - {t})
            if above:
                t = rng.choice(above)
        kept = {f: c for f, c in fdict.items() if nid == fs.root or rng.random() < 0.75}
        out[nid] = (t, kept)
    return _fs_from(out, fs.root)


def one_step_generalizations(h, fs: FeatureStructure):
    """Every structure exactly one commitment weaker than ``fs``."""
    nodes = _node_dict(fs)
    for nid, (t, fdict) in nodes.items():
        for parent in h.parents.get(t, ()):
            raised = dict(nodes)
            raised[nid] = (parent, fdict)
            yield _fs_from(raised, fs.root)
        for name in fdict:
            dropped = dict(nodes)
            dropped[nid] = (t, {f: c for f, c in fdict.items() if f != name})
            yield _fs_from(dropped, fs.root)
    indegree: dict[int, list[tuple[int, str]]] = {}
    for nid, (t, fdict) in nodes.items():
        for name, child in fdict.items():
            indegree.setdefault(child, []).append((nid, name))
    fresh = max(nodes) + 1
    for child, edges in indegree.items():
        if len(edges) < 2:
            continue
        for parent, name in edges:
            split = dict(nodes)
            split[fresh] = nodes[child]
            t, fdict = split[parent]
            redirected = dict(fdict)
            redirected[name] = fresh
            split[parent] = (t, redirected)
            yield _fs_from(split, fs.root)


def _outcome(h, f1, f2):
    try:
        return unify(h, f1, f2)
    except CycleError:
        return "cycle"


class TestAcceptance:
    def test_unification_algebra(self, frag):
        """≥1,000 random pairs: commutative, idempotent, symmetric failure,
        and minimal results (no one-step generalization stays compatible)."""
        h = frag.hierarchy
        rng = random.Random(424242)
        types = sorted(t for t in h.types if t != h.root and not is_string_type(t))
        feats = sorted({f for t in h.types for f in h.licensed_features(t)})[:10]
        started = time.perf_counter()
        pairs = successes = failures = cycles = 0

        def pair_stream():
            for trial in range(1200):
                if trial % 2 == 0:
                    base = random_fs(h, rng, types, feats)
                    yield (
                        generalized(h, base, rng, feats),
                        generalized(h, base, rng, feats),
                        True,
                    )
                else:
                    yield random_fs(h, rng, types, feats), random_fs(h, rng, types, feats), False
            # converging paths on one side, a path between them on the other:
            # the merge is consistent but the result graph closes a loop
            for t in (types[0], "sign"):
                converging = _fs_from({0: (t, {"F": 1, "G": 1}), 1: (t, {})}, 0)
                bridged = _fs_from(
                    {0: (t, {"F": 1, "G": 2}), 1: (t, {"H": 2}), 2: (t, {})}, 0
                )
                yield converging, bridged, False

        for f1, f2, compatible_by_construction in pair_stream():
            pairs += 1
            r12 = _outcome(h, f1, f2)
            r21 = _outcome(h, f2, f1)
            if isinstance(r12, FeatureStructure):
                assert isinstance(r21, FeatureStructure), "success must be symmetric"
            elif r12 == "cycle":
                assert r21 == "cycle", "cyclic results must be symmetric"
            else:
                assert isinstance(r21, UnifyFailure), "failure must be symmetric"
            if compatible_by_construction:
                assert isinstance(r12, FeatureStructure), "a shared specialization exists"
            if not isinstance(r12, FeatureStructure):
                if r12 == "cycle":
                    cycles += 1
                else:
                    failures += 1
                continue
            successes += 1
            assert isomorphic(r12, r21), "commutativity up to isomorphism"
            again = _outcome(h, f1, f1)
            assert isinstance(again, FeatureStructure) and isomorphic(again, f1), "idempotence"
            assert subsumes(h, f1, r12) and subsumes(h, f2, r12), "result below both inputs"
            for weaker in one_step_generalizations(h, r12):
                assert not (
                    subsumes(h, f1, weaker) and subsumes(h, f2, weaker)
                ), "result carries a commitment no input forces"
        elapsed = time.perf_counter() - started
        assert pairs >= 1000 and successes >= 200 and failures >= 200 and cycles >= 2
        assert elapsed < 60.0
        print(
            f"PASS unification-algebra: {pairs} pairs "
            f"({successes} unify, {failures} clash, {cycles} cycle) in {elapsed:.1f}s"
        )

    def test_glb_matches_enumeration_oracle(self, frag):
        """Fast GLB equals the descendant-set-maxima oracle on every type pair."""
        h = frag.hierarchy
        names = sorted(h.types)
        assert len(names) >= 60
        checked = 0
        for a in names:
            for b in names:
                assert h.glb(a, b) == brute_force_glb(h, a, b), (a, b)
                checked += 1
        print(f"PASS glb-oracle: {checked} pairs over {len(names)} types agree")

    def test_chart_matches_bruteforce_oracle(self, frag, table):
        """For every suite sentence ≤ 6 tokens the packed chart and the
        memo-free enumerator produce identical reading sets."""
        compared = 0
        for _, sentence, _, _ in suite_rows():
            if len(tokenize(sentence)) > 6:
                continue
            lattice = analyze(table, sentence)
            outcome = parse(frag, lattice)
            chart_readings, truncated = enumerate_readings(outcome.forest)
            assert not truncated
            oracle_status, oracle_readings = oracle_parse(frag, lattice)
            assert outcome.status == oracle_status, sentence
            assert {r.tree for r in chart_readings} == {r.tree for r in oracle_readings}, sentence
            compared += 1
        assert compared >= 30
        print(f"PASS parser-oracle: {compared} sentences, identical reading sets")

    def test_phenomenon_behaviors(self, frag, table):
        """The four case studies behave exactly as documented."""
        # 1. plain predicative copula parses
        out = parse(frag, analyze(table, "Mis abuelos son famosos."))
        assert out.status == "parsed"

        # 2. depictive shares ARG1 with the main event
        out = parse(frag, analyze(table, "Ellas hacen música juntas."))
        assert out.status == "parsed"
        readings, _ = enumerate_readings(out.forest)
        for reading in readings:
            m = extract_mrs(reading.fs, frag.hierarchy)
            event = next(
                ep for ep in m.rels if not ep.is_quantifier and ep.arg("ARG0") == m.index
            )
            depictive = next(ep for ep in m.rels if "junto" in ep.predicate)
            assert depictive.arg("ARG1") == event.arg("ARG1")

        # 3. agreement clash forces VP attachment; without the depictive
        #    rule the sentence has no parse at all
        clash = "Mis abuelos son personas famosos."
        out = parse(frag, analyze(table, clash))
        assert out.status == "parsed"
        readings, _ = enumerate_readings(out.forest)
        assert readings

        def labels(node):
            if node.is_leaf:
                return
            yield node.label
            for child in node.children:
                yield from labels(child)

        for reading in readings:
            assert "head-adjunct-attr" not in set(labels(reading.tree))
        no_depictive = load_grammar(esfrag_path(), {"flag.depictive-vp-mod": "off"})
        assert parse(no_depictive, analyze(table, clash)).status == "no-parse"

        # 4. the conditional parses only with the long-distance entry
        conditional = "Mis amigos pueden venir si quieren."
        assert parse(frag, analyze(table, conditional)).status == "parsed"
        no_ld = load_grammar(esfrag_path(), {"flag.querer-long-distance": "off"})
        assert parse(no_ld, analyze(table, conditional)).status == "no-parse"
        print("PASS phenomena: copula, depictive ARG1 sharing, clash attachment, conditional flag")

    def test_semantics_wellformed_and_canonical(self, frag, table):
        """Every reading: well-formed MRS, one DMRS node per EP, and a
        canonical form stable under 100 random renamings."""
        rng = random.Random(20260814)
        mrs_count = 0
        for _, sentence, status, _ in suite_rows():
            if status != "parsed":
                continue
            out = parse(frag, analyze(table, sentence))
            readings, _ = enumerate_readings(out.forest)
            for reading in readings:
                m = extract_mrs(reading.fs, frag.hierarchy)
                assert check_wellformed(m) == [], sentence
                assert len(to_dmrs(m).nodes) == len(m.rels), sentence
                reference = format_mrs(canonicalize(m))
                for _ in range(100):
                    renamed = rename_variables(m, rng)
                    assert format_mrs(canonicalize(renamed)) == reference, sentence
                mrs_count += 1
        assert mrs_count >= 30
        print(f"PASS semantics: {mrs_count} readings well-formed and rename-stable (100 trials each)")

    def test_metrics_fixture(self, gold):
        """The bundled learner set reproduces the hand-computed rates at two
        decimals, and accuracy never exceeds coverage on random profiles."""
        total = compute_metrics(profile_records(gold))[-1]
        assert total.cells()[:6] == ("ALL", "20", "0.92", "0.77", "0.57", "1.06")
        assert f"{12 / 13:.2f}" == "0.92"
        assert f"{10 / 13:.2f}" == "0.77"
        assert f"{4 / 7:.2f}" == "0.57"

        rng = random.Random(7)
        statuses = ("parsed", "no-parse", "lexical-gap", "resource-limit")
        for _ in range(300):
            records = [
                ItemRecord(
                    length=rng.randint(1, 8),
                    wf=rng.randint(0, 1),
                    status=rng.choice(statuses),
                    readings=rng.randint(0, 5),
                    decision=rng.choice(("accept", "reject", None)),
                )
                for _ in range(rng.randint(0, 40))
            ]
            for row in compute_metrics(records):
                if row.coverage is not None and row.accuracy is not None:
                    assert row.accuracy <= row.coverage
                for rate in (row.coverage, row.accuracy, row.overgeneration):
                    assert rate is None or 0.0 <= rate <= 1.0
        print("PASS metrics: 12/13, 10/13, 4/7 at two decimals; accuracy ≤ coverage on 300 profiles")

    def test_regression_gate(self, capsys, gold, flags_off):
        """Flag-off vs gold matches the shipped expectations and exits
        nonzero; comparing a profile to itself exits zero."""
        argv = [
            "treebank", "compare",
            "--profile", str(flags_off.path), "--against", str(gold.path),
            "--expect", str(SUITES / "regression-flags-off.tsv"),
        ]
        assert main(argv) == 1
        out = capsys.readouterr().out
        assert "mismatch" not in out
        assert main(
            ["treebank", "compare", "--profile", str(gold.path), "--against", str(gold.path)]
        ) == 0
        capsys.readouterr()
        print("PASS regression-gate: flag-off exits 1 per expectations, self-comparison exits 0")

    def test_performance_budget(self, frag, table):
        """Parse plus MRS extraction stays under 100 ms per suite sentence;
        the whole sweep stays far inside the five-minute budget."""
        timings = []
        started = time.perf_counter()
        for _, sentence, _, _ in suite_rows():
            t0 = time.perf_counter()
            out = parse(frag, analyze(table, sentence))
            readings, _ = enumerate_readings(out.forest)
            for reading in readings:
                extract_mrs(reading.fs, frag.hierarchy)
            timings.append(time.perf_counter() - t0)
        total = time.perf_counter() - started
        worst = max(timings)
        assert worst < 0.100, f"slowest sentence took {worst * 1000:.1f} ms"
        assert total < 300.0
        print(
            f"PASS performance: {len(timings)} sentences, worst {worst * 1000:.1f} ms, "
            f"sweep {total:.2f}s"
        )
