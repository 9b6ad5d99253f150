"""Bottom-up chart parser over a morphological lattice.

Edges with structurally equal feature structures pack into one chart
edge carrying alternative derivations, so reading counts come from a
product over the packed forest rather than from enumerating trees.
All orderings (edge ids, derivation alternatives, enumerated readings)
are deterministic: spans grow by length left to right, splits ascend,
and rules apply in declaration order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .fstruct import CycleError, FeatureStructure, Workspace, unify
from .grammar import DAUGHTER_FEATURES, PHRASE_DTRS, GrammarDefinition
from .morpho import SentenceLattice

PARSED = "parsed"
NO_PARSE = "no-parse"
LEXICAL_GAP = "lexical-gap"
RESOURCE_LIMIT = "resource-limit"


@dataclass(frozen=True)
class ParserLimits:
    """Caps on chart growth; exceeding either yields a partial forest."""

    max_edges: int = 10_000
    timeout: float = 5.0


@dataclass(frozen=True)
class DerivationTree:
    """One reading: phrase nodes are rule names, leaves are entry names."""

    label: str
    children: tuple[DerivationTree, ...] = ()
    token: str | None = None
    tag: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> list[DerivationTree]:
        if self.is_leaf:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]


@dataclass(frozen=True)
class Derivation:
    """One way of building an edge: a rule over child edges, or a leaf."""

    label: str
    children: tuple[int, ...] = ()
    token: str | None = None
    tag: str | None = None


@dataclass
class ChartEdge:
    id: int
    start: int
    end: int
    fs: FeatureStructure
    derivations: list[Derivation] = field(default_factory=list)


@dataclass
class ParseForest:
    n_tokens: int
    edges: list[ChartEdge] = field(default_factory=list)
    roots: tuple[int, ...] = ()

    def cell(self, start: int, end: int) -> list[ChartEdge]:
        return [e for e in self.edges if e.start == start and e.end == end]


@dataclass(frozen=True)
class Reading:
    tree: DerivationTree
    fs: FeatureStructure


@dataclass
class ParseOutcome:
    status: str
    lattice: SentenceLattice
    forest: ParseForest
    gaps: tuple[str, ...] = ()

    @property
    def readings(self) -> int:
        return count_readings(self.forest)


class _Limits:
    def __init__(self, limits: ParserLimits) -> None:
        self.limits = limits
        self.insertions = 0
        self.deadline = time.monotonic() + limits.timeout

    def charge(self) -> bool:
        self.insertions += 1
        return self.insertions > self.limits.max_edges or time.monotonic() > self.deadline


def apply_rule(
    g: GrammarDefinition, rule_name: str, *daughters: FeatureStructure
) -> FeatureStructure | None:
    """Plug daughters into a phrase rule; None when unification fails."""
    rule = g.phraserules[rule_name]
    ws = Workspace(g.hierarchy)
    root = ws.load(rule.fs)
    for feat, fs in zip(PHRASE_DTRS, daughters):
        if ws.merge(ws.get(root, feat), ws.load(fs)) is not None:
            return None
    try:
        return ws.extract(root, DAUGHTER_FEATURES)
    except CycleError:
        return None


def _lexical_items(g: GrammarDefinition, lattice: SentenceLattice):
    """Per-token (surface, [(entry-name, tag, fs)]) in surface order."""
    by_start = {a.token.start: a for a in lattice.analyses}
    out = []
    for token in lattice.tokens:
        analysis = by_start.get(token.start)
        items = []
        if analysis is not None:
            for reading in analysis.readings:
                for entry, fs in g.lookup_entries(reading.lemma, reading.tag):
                    items.append((entry.name, reading.tag, fs))
        out.append((token.surface, items))
    return out


class _Cell:
    """Edges of one span, packed by structural equality of their FS."""

    def __init__(self) -> None:
        self.by_fs: dict[FeatureStructure, ChartEdge] = {}
        self.order: list[ChartEdge] = []

    def add(self, forest, span, fs, deriv) -> ChartEdge:
        edge = self.by_fs.get(fs)
        if edge is None:
            edge = ChartEdge(len(forest.edges), span[0], span[1], fs)
            self.by_fs[fs] = edge
            self.order.append(edge)
            forest.edges.append(edge)
        if deriv not in edge.derivations:
            edge.derivations.append(deriv)
        return edge


def _close_unary(g, forest, span, cell, seeds, limits) -> bool:
    """Apply unary rules to closure; True when a limit tripped.

    A chain never reuses a rule, so closure terminates even if unary
    outputs were to feed each other.
    """
    unary = [(n, r) for n, r in g.phraserules.items() if r.arity == 1]
    frontier = [(edge, frozenset()) for edge in seeds]
    while frontier:
        grown = []
        for edge, used in frontier:
            for name, _ in unary:
                if name in used:
                    continue
                result = apply_rule(g, name, edge.fs)
                if result is None:
                    continue
                if limits.charge():
                    return True
                new_edge = cell.add(forest, span, result, Derivation(name, (edge.id,)))
                grown.append((new_edge, used | {name}))
        frontier = grown
    return False


def parse(
    g: GrammarDefinition,
    lattice: SentenceLattice,
    limits: ParserLimits | None = None,
) -> ParseOutcome:
    items = _lexical_items(g, lattice)
    n = len(items)
    forest = ParseForest(n)
    gaps = tuple(surface for surface, found in items if not found)
    if gaps or n == 0:
        return ParseOutcome(LEXICAL_GAP if gaps else NO_PARSE, lattice, forest, gaps)

    meter = _Limits(limits or ParserLimits())
    binary = [(name, r) for name, r in g.phraserules.items() if r.arity == 2]
    cells: dict[tuple[int, int], _Cell] = {}

    for i, (surface, found) in enumerate(items):
        span = (i, i + 1)
        cell = cells[span] = _Cell()
        for entry_name, tag, fs in found:
            if meter.charge():
                return ParseOutcome(RESOURCE_LIMIT, lattice, forest)
            cell.add(forest, span, fs, Derivation(entry_name, token=surface, tag=tag))
        if _close_unary(g, forest, span, cell, list(cell.order), meter):
            return ParseOutcome(RESOURCE_LIMIT, lattice, forest)

    for length in range(2, n + 1):
        for i in range(0, n - length + 1):
            span = (i, i + length)
            cell = cells[span] = _Cell()
            seeds: list[ChartEdge] = []
            seed_ids: set[int] = set()
            for k in range(i + 1, i + length):
                for left in cells[(i, k)].order:
                    for right in cells[(k, i + length)].order:
                        for name, _ in binary:
                            result = apply_rule(g, name, left.fs, right.fs)
                            if result is None:
                                continue
                            if meter.charge():
                                return ParseOutcome(RESOURCE_LIMIT, lattice, forest)
                            edge = cell.add(
                                forest, span, result, Derivation(name, (left.id, right.id))
                            )
                            if edge.id not in seed_ids:
                                seed_ids.add(edge.id)
                                seeds.append(edge)
            if _close_unary(g, forest, span, cell, seeds, meter):
                return ParseOutcome(RESOURCE_LIMIT, lattice, forest)

    root = g.root_condition
    roots = tuple(
        e.id
        for e in cells[(0, n)].order
        if isinstance(unify(g.hierarchy, e.fs, root), FeatureStructure)
    )
    forest.roots = roots
    return ParseOutcome(PARSED if roots else NO_PARSE, lattice, forest)


def count_readings(forest: ParseForest) -> int:
    memo: dict[int, int] = {}

    def count(eid: int) -> int:
        if eid not in memo:
            memo[eid] = sum(
                _prod(count(c) for c in d.children) if d.children else 1
                for d in forest.edges[eid].derivations
            )
        return memo[eid]

    return sum(count(eid) for eid in forest.roots)


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def _edge_trees(forest: ParseForest, eid: int, memo) -> list[DerivationTree]:
    if eid in memo:
        return memo[eid]
    out = []
    for d in forest.edges[eid].derivations:
        if not d.children:
            out.append(DerivationTree(d.label, token=d.token, tag=d.tag))
            continue
        parts = [_edge_trees(forest, c, memo) for c in d.children]
        combos = [()]
        for alternatives in parts:
            combos = [prefix + (t,) for prefix in combos for t in alternatives]
        out.extend(DerivationTree(d.label, children=c) for c in combos)
    memo[eid] = out
    return out


def enumerate_readings(
    forest: ParseForest, cap: int | None = None
) -> tuple[tuple[Reading, ...], bool]:
    """All root readings in deterministic order, truncated at ``cap``."""
    readings: list[Reading] = []
    memo: dict[int, list[DerivationTree]] = {}
    for eid in forest.roots:
        fs = forest.edges[eid].fs
        for tree in _edge_trees(forest, eid, memo):
            if cap is not None and len(readings) >= cap:
                return tuple(readings), True
            readings.append(Reading(tree, fs))
    return tuple(readings), False


def replay(g: GrammarDefinition, tree: DerivationTree) -> FeatureStructure | None:
    """Rebuild a reading's feature structure from its derivation tree."""
    if tree.is_leaf:
        for entry, fs in g.lookup_entries(g.entries[tree.label].lemma, tree.tag):
            if entry.name == tree.label:
                return fs
        raise KeyError(f"no lexical item {tree.label}/{tree.tag}")
    return apply_rule(g, tree.label, *[replay(g, c) for c in tree.children])


def oracle_parse(g: GrammarDefinition, lattice: SentenceLattice) -> tuple[str, tuple[Reading, ...]]:
    """Exhaustive recursive enumeration, for cross-checking the chart.

    No packing and no edge ids: every derivation over every span is
    built independently, so it is exponential and refuses long inputs.
    """
    items = _lexical_items(g, lattice)
    if len(items) > 8:
        raise ValueError("oracle parsing is exponential; refusing more than 8 tokens")
    gaps = [surface for surface, found in items if not found]
    if gaps or not items:
        return (LEXICAL_GAP if gaps else NO_PARSE), ()

    unary = [(n, r) for n, r in g.phraserules.items() if r.arity == 1]
    binary = [(n, r) for n, r in g.phraserules.items() if r.arity == 2]

    def close(found: list[tuple[FeatureStructure, frozenset, DerivationTree]]):
        out = list(found)
        frontier = list(found)
        while frontier:
            grown = []
            for fs, used, tree in frontier:
                for name, _ in unary:
                    if name in used:
                        continue
                    result = apply_rule(g, name, fs)
                    if result is not None:
                        item = (result, used | {name}, DerivationTree(name, (tree,)))
                        out.append(item)
                        grown.append(item)
            frontier = grown
        return out

    def derive(i: int, j: int):
        if j - i == 1:
            surface, found = items[i]
            return close(
                [
                    (fs, frozenset(), DerivationTree(name, token=surface, tag=tag))
                    for name, tag, fs in found
                ]
            )
        found = []
        for k in range(i + 1, j):
            for lfs, _, ltree in derive(i, k):
                for rfs, _, rtree in derive(k, j):
                    for name, _ in binary:
                        result = apply_rule(g, name, lfs, rfs)
                        if result is not None:
                            found.append(
                                (result, frozenset(), DerivationTree(name, (ltree, rtree)))
                            )
        return close(found)

    readings = tuple(
        Reading(tree, fs)
        for fs, _, tree in derive(0, len(items))
        if isinstance(unify(g.hierarchy, fs, g.root_condition), FeatureStructure)
    )
    return (PARSED if readings else NO_PARSE), readings
