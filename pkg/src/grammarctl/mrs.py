"""Minimal recursion semantics read out of parsed feature structures.

Variable names are allocated densely in a fixed traversal order (TOP,
INDEX, then each relation's label and roles, then handle constraints),
so extraction is deterministic and renaming-insensitive comparisons can
canonicalize by re-running the same allocation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import permutations

from .fstruct import FeatureStructure
from .hierarchy import TypeHierarchy, is_string_type

ROLE_ORDER = ("ARG0", "ARG1", "ARG2", "ARG3", "RSTR", "BODY")
_EP_INTERNAL = {"LBL", "PRED"}


@dataclass(frozen=True)
class SemVariable:
    name: str
    sort: str  # "h" | "e" | "x" | "i"
    properties: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class EP:
    predicate: str
    label: SemVariable
    args: tuple[tuple[str, SemVariable], ...]

    def arg(self, role: str) -> SemVariable | None:
        for name, var in self.args:
            if name == role:
                return var
        return None

    @property
    def is_quantifier(self) -> bool:
        return self.arg("RSTR") is not None


@dataclass(frozen=True)
class HandleConstraint:
    harg: SemVariable
    larg: SemVariable


@dataclass(frozen=True)
class Mrs:
    top: SemVariable
    index: SemVariable
    rels: tuple[EP, ...]
    hcons: tuple[HandleConstraint, ...]


@dataclass(frozen=True)
class DmrsNode:
    id: int
    predicate: str
    sort: str
    properties: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class DmrsLink:
    start: int
    end: int
    role: str
    post: str  # "H" | "EQ" | "NEQ" | "HEQ"


@dataclass(frozen=True)
class Dmrs:
    nodes: tuple[DmrsNode, ...]
    links: tuple[DmrsLink, ...]
    top: int


class MrsSyntaxError(ValueError):
    pass


def _dlist_nodes(fs: FeatureStructure, feature: str) -> list[int]:
    node, last, out = fs.resolve(feature, "LIST"), fs.resolve(feature, "LAST"), []
    while node != last:
        feats = fs.features(node)
        out.append(feats["FIRST"])
        node = feats["REST"]
    return out


def _sort_of(h: TypeHierarchy, t: str) -> str:
    for super_type, sort in (("event", "e"), ("ref-ind", "x"), ("handle", "h")):
        if h.subtype_of(t, super_type):
            return sort
    return "i"


def _declaration_rank(h: TypeHierarchy, feature: str) -> int:
    """Position of a feature in its introducer's declaration order."""
    intro = h.introducer(feature)
    if intro is None:
        return 0
    for i, name in enumerate(h.appropriateness.get(intro, {})):
        if name == feature:
            return i
    return 0


def _leaf_properties(fs: FeatureStructure, h: TypeHierarchy, nid: int) -> tuple[tuple[str, str], ...]:
    """Leaf features whose value is strictly narrower than its restriction,
    ordered as the grammar declares them."""
    out: list[tuple[str, str]] = []

    def walk(node: int) -> None:
        bearer = fs.node_type(node)
        for feature, child in fs.features(node).items():
            if fs.features(child):
                walk(child)
                continue
            value = fs.node_type(child)
            restriction = h.feature_restriction(bearer, feature)
            if restriction is not None and value != restriction and h.subtype_of(value, restriction):
                out.append((feature, value))

    walk(nid)
    out.sort(key=lambda kv: (_declaration_rank(h, kv[0]), kv[0]))
    return tuple(out)


class _Allocator:
    def __init__(self, fs: FeatureStructure, h: TypeHierarchy) -> None:
        self.fs, self.h = fs, h
        self.by_node: dict[int, SemVariable] = {}
        self.counter = 0

    def var(self, nid: int) -> SemVariable:
        found = self.by_node.get(nid)
        if found is None:
            sort = _sort_of(self.h, self.fs.node_type(nid))
            props = () if sort == "h" else _leaf_properties(self.fs, self.h, nid)
            found = SemVariable(f"{sort}{self.counter}", sort, props)
            self.counter += 1
            self.by_node[nid] = found
        return found


def extract_mrs(fs: FeatureStructure, h: TypeHierarchy) -> Mrs:
    """Read the semantics off a root feature structure."""
    alloc = _Allocator(fs, h)
    top = alloc.var(fs.resolve("SS", "HOOK", "LTOP"))
    index = alloc.var(fs.resolve("SS", "HOOK", "INDEX"))
    rels = []
    for ep_node in _dlist_nodes(fs, "RELS"):
        feats = fs.features(ep_node)
        pred = fs.node_type(feats["PRED"])
        if is_string_type(pred):
            pred = pred[1:-1]
        label = alloc.var(feats["LBL"])
        args = tuple(
            (role, alloc.var(feats[role])) for role in ROLE_ORDER if role in feats
        )
        rels.append(EP(pred, label, args))
    hcons = tuple(
        HandleConstraint(alloc.var(fs.features(q)["HARG"]), alloc.var(fs.features(q)["LARG"]))
        for q in _dlist_nodes(fs, "HCONS")
    )
    return Mrs(top, index, tuple(rels), hcons)


def check_wellformed(m: Mrs) -> list[str]:
    """Structural problems; an empty list means the MRS is well formed."""
    problems = []
    if m.top.sort != "h":
        problems.append(f"TOP {m.top.name} is not a handle")
    if m.index.sort == "h":
        problems.append(f"INDEX {m.index.name} is a handle")
    labels = {ep.label.name for ep in m.rels}
    if m.top.name not in labels:
        problems.append(f"TOP {m.top.name} labels no relation")
    scopal_args = set()
    for ep in m.rels:
        if ep.label.sort != "h":
            problems.append(f"{ep.predicate} label {ep.label.name} is not a handle")
        if ep.arg("ARG0") is None:
            problems.append(f"{ep.predicate} has no ARG0")
        if ep.is_quantifier and ep.arg("BODY") is None:
            problems.append(f"quantifier {ep.predicate} has no BODY")
        for role, var in ep.args:
            if var.sort == "h":
                scopal_args.add(var.name)
                if var.name in labels:
                    problems.append(
                        f"{ep.predicate} {role} {var.name} names a label directly"
                    )
    seen_hargs = set()
    for hc in m.hcons:
        if hc.harg.name in seen_hargs:
            problems.append(f"two constraints share {hc.harg.name}")
        seen_hargs.add(hc.harg.name)
        if hc.harg.name not in scopal_args:
            problems.append(f"constraint on {hc.harg.name} which no relation selects")
        if hc.larg.name not in labels:
            problems.append(f"constraint names missing label {hc.larg.name}")
    return problems


def _label_head(m: Mrs, label: str) -> int | None:
    """The relation a shared label stands for: the one no sister selects."""
    group = [i for i, ep in enumerate(m.rels) if ep.label.name == label]
    if len(group) == 1:
        return group[0]
    selected = {
        var.name
        for i in group
        for role, var in m.rels[i].args
        if role != "ARG0"
    }
    for i in group:
        arg0 = m.rels[i].arg("ARG0")
        if arg0 is not None and arg0.name not in selected:
            return i
    return group[0] if group else None


def to_dmrs(m: Mrs) -> Dmrs:
    qeq = {hc.harg.name: hc.larg.name for hc in m.hcons}
    nodes = tuple(
        DmrsNode(i, ep.predicate, (ep.arg("ARG0") or ep.label).sort,
                 (ep.arg("ARG0") or ep.label).properties)
        for i, ep in enumerate(m.rels)
    )
    by_arg0: dict[str, list[int]] = {}
    for i, ep in enumerate(m.rels):
        arg0 = ep.arg("ARG0")
        if arg0 is not None:
            by_arg0.setdefault(arg0.name, []).append(i)

    def variable_target(name: str, source: int) -> int | None:
        candidates = [i for i in by_arg0.get(name, []) if i != source]
        for i in candidates:
            if not m.rels[i].is_quantifier:
                return i
        return candidates[0] if candidates else None

    links = []
    for i, ep in enumerate(m.rels):
        for role, var in ep.args:
            if role == "ARG0" or (role == "BODY" and ep.is_quantifier):
                continue
            if var.sort == "h":
                label = qeq.get(var.name)
                if label is not None:
                    target = _label_head(m, label)
                    if target is not None:
                        links.append(DmrsLink(i, target, role, "H"))
                elif var.name in {e.label.name for e in m.rels}:
                    target = _label_head(m, var.name)
                    if target is not None and target != i:
                        links.append(DmrsLink(i, target, role, "HEQ"))
                continue
            target = variable_target(var.name, i)
            if target is not None:
                post = "EQ" if m.rels[target].label.name == ep.label.name else "NEQ"
                links.append(DmrsLink(i, target, role, post))

    top = next(
        (i for i, ep in enumerate(m.rels)
         if ep.label.name == m.top.name and not ep.is_quantifier),
        0,
    )
    return Dmrs(nodes, tuple(links), top)


def _rename(m: Mrs) -> Mrs:
    """Reallocate variable names in the fixed traversal order."""
    mapping: dict[str, SemVariable] = {}
    counter = 0

    def fresh(var: SemVariable) -> SemVariable:
        nonlocal counter
        found = mapping.get(var.name)
        if found is None:
            found = replace(var, name=f"{var.sort}{counter}")
            counter += 1
            mapping[var.name] = found
        return found

    top = fresh(m.top)
    index = fresh(m.index)
    rels = tuple(
        EP(ep.predicate, fresh(ep.label), tuple((r, fresh(v)) for r, v in ep.args))
        for ep in m.rels
    )
    hcons = tuple(HandleConstraint(fresh(c.harg), fresh(c.larg)) for c in m.hcons)
    return Mrs(top, index, rels, hcons)


def canonicalize(m: Mrs) -> Mrs:
    """Normal form under variable renaming; relation order is kept."""
    return _rename(m)


def _ordered_variants(rels: tuple[EP, ...]):
    """Relation orders that only permute equal-predicate runs."""
    by_pred: dict[str, list[EP]] = {}
    for ep in rels:
        by_pred.setdefault(ep.predicate, []).append(ep)
    preds = sorted(by_pred)

    def expand(i: int, prefix: tuple[EP, ...]):
        if i == len(preds):
            yield prefix
            return
        for perm in permutations(by_pred[preds[i]]):
            yield from expand(i + 1, prefix + tuple(perm))

    yield from expand(0, ())


def equivalent(a: Mrs, b: Mrs) -> bool:
    """Equality up to variable renaming and relation order."""
    return _canonical_key(a) == _canonical_key(b)


def _canonical_key(m: Mrs) -> str:
    best = None
    for rels in _ordered_variants(m.rels):
        candidate = canonicalize(Mrs(m.top, m.index, rels, m.hcons))
        text = format_mrs(
            replace(candidate, hcons=tuple(sorted(candidate.hcons, key=lambda c: c.harg.name)))
        )
        if best is None or text < best:
            best = text
    return best or ""


def format_mrs(m: Mrs) -> str:
    seen: set[str] = set()

    def show(var: SemVariable) -> str:
        if var.name in seen or not var.properties:
            return var.name
        seen.add(var.name)
        inner = " ".join(f"{k}: {v}" for k, v in var.properties)
        return f"{var.name} [ {inner} ]"

    lines = [f"[ TOP: {show(m.top)}", f"  INDEX: {show(m.index)}"]
    if not m.rels:
        lines.append("  RELS: < >")
    for i, ep in enumerate(m.rels):
        parts = [f'"{ep.predicate}"', f"LBL: {show(ep.label)}"]
        parts += [f"{role}: {show(var)}" for role, var in ep.args]
        opener = "  RELS: < " if i == 0 else "          "
        closer = " >" if i == len(m.rels) - 1 else ""
        lines.append(f"{opener}[ {' '.join(parts)} ]{closer}")
    triples = " ".join(f"{c.harg.name} qeq {c.larg.name}" for c in m.hcons)
    lines.append(f"  HCONS: < {triples} > ]" if triples else "  HCONS: < > ]")
    return "\n".join(lines)


def parse_mrs(text: str) -> Mrs:
    tokens = text.replace("[", " [ ").replace("]", " ] ").replace("<", " < ").replace(">", " > ").split()
    pos = 0

    def peek() -> str:
        if pos >= len(tokens):
            raise MrsSyntaxError("unexpected end of input")
        return tokens[pos]

    def take(expected: str | None = None) -> str:
        nonlocal pos
        tok = peek()
        if expected is not None and tok != expected:
            raise MrsSyntaxError(f"expected {expected!r}, found {tok!r}")
        pos += 1
        return tok

    variables: dict[str, SemVariable] = {}

    def variable() -> SemVariable:
        name = take()
        sort = name[0]
        if sort not in "hexi" or not name[1:].isdigit():
            raise MrsSyntaxError(f"bad variable {name!r}")
        props: list[tuple[str, str]] = []
        if peek() == "[":
            take("[")
            while peek() != "]":
                key = take()
                if not key.endswith(":"):
                    raise MrsSyntaxError(f"bad property name {key!r}")
                props.append((key[:-1], take()))
            take("]")
        found = variables.get(name)
        if found is None:
            found = SemVariable(name, sort, tuple(props))
            variables[name] = found
        elif props and not found.properties:
            found = replace(found, properties=tuple(props))
            variables[name] = found
        return found

    def ep() -> EP:
        take("[")
        pred = take()
        if not (pred.startswith('"') and pred.endswith('"')):
            raise MrsSyntaxError(f"bad predicate {pred!r}")
        take("LBL:")
        label = variable()
        args = []
        while peek() != "]":
            role = take()
            if not role.endswith(":"):
                raise MrsSyntaxError(f"bad role {role!r}")
            args.append((role[:-1], variable()))
        take("]")
        return EP(pred[1:-1], label, tuple(args))

    take("[")
    take("TOP:")
    top = variable()
    take("INDEX:")
    index = variable()
    take("RELS:")
    take("<")
    rels = []
    while peek() != ">":
        rels.append(ep())
    take(">")
    take("HCONS:")
    take("<")
    hcons = []
    while peek() != ">":
        harg = variable()
        take("qeq")
        hcons.append(HandleConstraint(harg, variable()))
    take(">")
    take("]")
    if pos != len(tokens):
        raise MrsSyntaxError(f"trailing content: {tokens[pos]!r}")
    return Mrs(top, index, tuple(rels), tuple(hcons))
