"""Typed feature structures and non-destructive unification.

A feature structure is a rooted, acyclic, possibly reentrant graph whose
nodes carry types from a hierarchy and whose edges carry feature names.
Structures are immutable once built and normalised so that node ids are
assigned densely in first-visit order (features walked alphabetically);
two equal structures therefore have identical node tables, and
serialisations are stable byte for byte.

Unification never mutates its inputs.  It loads both graphs into a
union-find workspace, merges from the roots computing type GLBs, and
extracts a fresh structure from the merged graph.  Type clashes produce
a :class:`UnifyFailure` carrying the feature path and the offending type
pair; failure is an expected outcome, not an exception.  A cyclic merge
result, by contrast, is an error (:class:`CycleError`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .hierarchy import TypeHierarchy, is_string_type

FeaturePath = tuple[str, ...]


@dataclass(frozen=True)
class UnifyFailure:
    """Where and why unification failed: first clash in feature-name order."""

    path: FeaturePath
    types: tuple[str, str]

    def __str__(self) -> str:
        where = ".".join(self.path) if self.path else "(root)"
        return f"unification failure at {where}: {self.types[0]} ^ {self.types[1]}"


class CycleError(Exception):
    """A structure (or unification result) contains a feature cycle."""


class FeatureStructure:
    """Immutable typed feature graph; construct via :meth:`build`."""

    __slots__ = ("_types", "_feats")

    def __init__(self, types: list[str], feats: list[dict[str, int]]):
        self._types = types
        self._feats = feats

    # -- construction ---------------------------------------------------

    @classmethod
    def build(
        cls,
        nodes: Mapping[int, tuple[str, Mapping[str, int]]],
        root: int,
    ) -> "FeatureStructure":
        """Normalise a raw node table into a structure.

        Nodes unreachable from the root are dropped; a cycle raises
        :class:`CycleError`.
        """
        types: list[str] = []
        feats: list[dict[str, int]] = []
        mapping: dict[int, int] = {}
        on_stack: set[int] = set()

        def visit(old: int) -> int:
            if old in mapping:
                if old in on_stack:
                    raise CycleError(f"feature cycle through node {old}")
                return mapping[old]
            t, fs = nodes[old]
            new = len(types)
            mapping[old] = new
            types.append(t)
            feats.append({})
            on_stack.add(old)
            for name in sorted(fs):
                feats[new][name] = visit(fs[name])
            on_stack.discard(old)
            return new

        visit(root)
        return cls(types, feats)

    @classmethod
    def atom(cls, type_name: str) -> "FeatureStructure":
        return cls([type_name], [{}])

    # -- views ------------------------------------------------------------

    @property
    def root(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self._types)

    def node_type(self, nid: int) -> str:
        return self._types[nid]

    def features(self, nid: int) -> dict[str, int]:
        return dict(self._feats[nid])

    def nodes(self) -> Iterator[tuple[int, str, dict[str, int]]]:
        for nid, (t, fs) in enumerate(zip(self._types, self._feats)):
            yield nid, t, dict(fs)

    def resolve(self, *path: str) -> int | None:
        """Node id at a feature path from the root, or None."""
        nid = 0
        for name in path:
            nxt = self._feats[nid].get(name)
            if nxt is None:
                return None
            nid = nxt
        return nid

    def type_at(self, *path: str) -> str | None:
        nid = self.resolve(*path)
        return None if nid is None else self._types[nid]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureStructure):
            return NotImplemented
        return self._types == other._types and self._feats == other._feats

    def __hash__(self) -> int:
        return hash(
            (
                tuple(self._types),
                tuple(tuple(sorted(f.items())) for f in self._feats),
            )
        )

    def __repr__(self) -> str:
        return f"<FeatureStructure {self._types[0]} nodes={len(self)}>"

    def __str__(self) -> str:
        return self.to_avm()

    # -- validation -------------------------------------------------------

    def validate(self, h: TypeHierarchy) -> list[str]:
        """Check types exist and every feature is licensed. Returns problems."""
        problems = []
        for nid, t, fs in self.nodes():
            if t not in h:
                problems.append(f"node {nid}: unknown type {t!r}")
                continue
            for name in fs:
                if not h.licenses(t, name):
                    problems.append(f"node {nid}: feature {name} not appropriate for type {t}")
        return problems

    # -- serialisation ------------------------------------------------------

    def to_avm(self, indent: int = 2) -> str:
        """Indented AVM text with ``#n`` reentrancy tags in first-visit order."""
        seen: set[int] = set()
        shared: set[int] = set()
        order: list[int] = []

        def scan(nid: int) -> None:
            if nid in seen:
                shared.add(nid)
                return
            seen.add(nid)
            order.append(nid)
            for name in sorted(self._feats[nid]):
                scan(self._feats[nid][name])

        scan(0)
        tags = {nid: i for i, nid in enumerate(n for n in order if n in shared)}
        emitted: set[int] = set()

        def fmt(nid: int, depth: int) -> str:
            prefix = ""
            if nid in tags:
                if nid in emitted:
                    return f"#{tags[nid]}"
                emitted.add(nid)
                prefix = f"#{tags[nid]} "
            t = self._types[nid]
            fs = self._feats[nid]
            if not fs:
                return prefix + t
            pad = " " * (indent * (depth + 1))
            lines = [f"{prefix}[ {t}"]
            for name in sorted(fs):
                lines.append(f"{pad}{name} {fmt(fs[name], depth + 1)}")
            return "\n".join(lines) + " ]"

        return fmt(0, 0)


def empty_fs(h: TypeHierarchy) -> FeatureStructure:
    """The identity element for unification: a bare root-typed node."""
    return FeatureStructure.atom(h.root)


class Workspace:
    """Union-find graph used to assemble and unify feature structures.

    This is the mutable build surface behind :func:`unify`, grammar
    constraint expansion and rule application.  Nodes are integer refs;
    ``merge`` unifies two subgraphs in place, and ``extract`` copies a
    normalised immutable structure back out (optionally dropping named
    features at the root, which is how rule daughters are removed from
    derived constituents).
    """

    def __init__(self, h: TypeHierarchy):
        self.h = h
        self._parent: list[int] = []
        self._types: list[str] = []
        self._feats: list[dict[str, int]] = []

    def new_node(self, type_name: str) -> int:
        ref = len(self._parent)
        self._parent.append(ref)
        self._types.append(type_name)
        self._feats.append({})
        return ref

    def find(self, ref: int) -> int:
        root = ref
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[ref] != root:
            self._parent[ref], ref = root, self._parent[ref]
        return root

    def type_of(self, ref: int) -> str:
        return self._types[self.find(ref)]

    def feats_of(self, ref: int) -> dict[str, int]:
        return self._feats[self.find(ref)]

    def load(self, fs: FeatureStructure) -> int:
        """Copy a structure into the workspace; returns the root ref."""
        base = len(self._parent)
        for nid, t, _ in fs.nodes():
            self.new_node(t)
        for nid, _, feats in fs.nodes():
            self._feats[base + nid] = {n: base + c for n, c in feats.items()}
        return base

    def constrain(self, ref: int, type_name: str, path: FeaturePath = ()) -> UnifyFailure | None:
        """Narrow a node's type to its GLB with ``type_name``."""
        rep = self.find(ref)
        t = self.h.glb(self._types[rep], type_name)
        if t is None:
            return UnifyFailure(path, (self._types[rep], type_name))
        self._types[rep] = t
        return None

    def merge(self, a: int, b: int, path: FeaturePath = ()) -> UnifyFailure | None:
        """Unify two subgraphs; returns the first failure or None."""
        a, b = self.find(a), self.find(b)
        if a == b:
            return None
        ta, tb = self._types[a], self._types[b]
        t = self.h.glb(ta, tb)
        if t is None:
            return UnifyFailure(path, (ta, tb))
        self._parent[b] = a
        self._types[a] = t
        fa, fb = self._feats[a], self._feats[b]
        self._feats[b] = {}
        for name in sorted(fb):
            target = fb[name]
            rep = self.find(a)
            cur = self._feats[rep].get(name)
            if cur is None:
                self._feats[rep][name] = target
            else:
                failure = self.merge(cur, target, path + (name,))
                if failure is not None:
                    return failure
        return None

    def get(self, ref: int, *path: str) -> int | None:
        cur = self.find(ref)
        for name in path:
            nxt = self._feats[cur].get(name)
            if nxt is None:
                return None
            cur = self.find(nxt)
        return cur

    def add_path(self, ref: int, path: FeaturePath) -> int:
        """Ensure a chain of features exists below ``ref`` (root-typed nodes)."""
        cur = self.find(ref)
        for name in path:
            nxt = self._feats[cur].get(name)
            if nxt is None:
                nxt = self.new_node(self.h.root)
                self._feats[cur][name] = nxt
            cur = self.find(nxt)
        return cur

    def extract(self, ref: int, drop_root_features: frozenset[str] = frozenset()) -> FeatureStructure:
        """Copy the subgraph at ``ref`` out as an immutable structure."""
        root = self.find(ref)
        nodes: dict[int, tuple[str, dict[str, int]]] = {}
        stack = [root]
        while stack:
            rep = stack.pop()
            if rep in nodes:
                continue
            feats = {}
            for name, child in self._feats[rep].items():
                if rep == root and name in drop_root_features:
                    continue
                feats[name] = self.find(child)
            nodes[rep] = (self._types[rep], feats)
            stack.extend(c for c in feats.values() if c not in nodes)
        return FeatureStructure.build(nodes, root)


def unify(
    h: TypeHierarchy,
    f1: FeatureStructure,
    f2: FeatureStructure,
) -> FeatureStructure | UnifyFailure:
    """Unify two structures without mutating either.

    Returns the most general structure subsumed by both, or a
    :class:`UnifyFailure` locating the first incompatibility (features
    walked in sorted name order).  Raises :class:`CycleError` should the
    merged graph contain a cycle.
    """
    ws = Workspace(h)
    r1 = ws.load(f1)
    r2 = ws.load(f2)
    failure = ws.merge(r1, r2)
    if failure is not None:
        return failure
    return ws.extract(r1)


def subsumes(h: TypeHierarchy, general: FeatureStructure, specific: FeatureStructure) -> bool:
    """True when ``specific`` carries all of ``general``'s information.

    There must be a root-preserving node mapping that weakens no type,
    drops no feature, and collapses no reentrancy.
    """
    mapping: dict[int, int] = {}
    stack = [(general.root, specific.root)]
    while stack:
        g, s = stack.pop()
        prior = mapping.get(g)
        if prior is not None:
            if prior != s:
                return False
            continue
        mapping[g] = s
        if not h.subtype_of(specific.node_type(s), general.node_type(g)):
            return False
        sfeats = specific.features(s)
        for name, gchild in general.features(g).items():
            schild = sfeats.get(name)
            if schild is None:
                return False
            stack.append((gchild, schild))
    return True


def isomorphic(f1: FeatureStructure, f2: FeatureStructure) -> bool:
    """Mutual subsumption: identical up to node renaming.

    Implemented directly (bijective mapping with equal types and feature
    sets), which for finite acyclic structures coincides with subsumption
    in both directions.
    """
    if len(f1) != len(f2):
        return False
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}
    stack = [(f1.root, f2.root)]
    while stack:
        a, b = stack.pop()
        if a in fwd or b in bwd:
            if fwd.get(a) != b or bwd.get(b) != a:
                return False
            continue
        fwd[a] = b
        bwd[b] = a
        if f1.node_type(a) != f2.node_type(b):
            return False
        fa, fb = f1.features(a), f2.features(b)
        if fa.keys() != fb.keys():
            return False
        for name in fa:
            stack.append((fa[name], fb[name]))
    return True
