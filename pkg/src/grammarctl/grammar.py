"""Grammar loading: TDL definition files to expanded feature structures.

A grammar directory contains seven files::

    types.tdl     type hierarchy with appropriateness declarations
    lexicon.tdl   lexical entries (STEM plus a KEYREL predicate)
    lexrules.tdl  lexical rules applied along tag-map chains
    rules.tdl     unary/binary phrase structure rules (DTR1/DTR2 daughters)
    roots.tdl     root conditions a full-span parse must satisfy
    tagmap.tsv    morphological tag -> comma-separated lexical-rule chain
    options.cfg   feature flags plus rule/entry gates (key = value)

Loading validates the hierarchy, expands every definition to its full
inherited constraint, and cross-checks every name reference; the result
is immutable and safe to share between threads.
"""

from __future__ import annotations

import hashlib
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from . import tdl
from .fstruct import CycleError, FeaturePath, FeatureStructure, Workspace
from .hierarchy import TOP, STRING, TypeHierarchy, UnknownTypeError, is_string_type

# Structural conventions the loader bakes into the sugar and rule format.
CONS = "cons"
EMPTY_LIST = "elist"
DIFF_LIST = "*dlist*"
FIRST, REST = "FIRST", "REST"
DL_LIST, DL_LAST = "LIST", "LAST"
LEXRULE_DTR = "DTR"
PHRASE_DTRS = ("DTR1", "DTR2")
DAUGHTER_FEATURES = frozenset({LEXRULE_DTR, *PHRASE_DTRS})
INFL_RULE_TYPE = "infl-lexrule"

_FILES = {
    "types": "types.tdl",
    "lexicon": "lexicon.tdl",
    "lexrules": "lexrules.tdl",
    "rules": "rules.tdl",
    "roots": "roots.tdl",
    "tagmap": "tagmap.tsv",
    "options": "options.cfg",
}

_MAX_EXPANSION_PASSES = 64


class LoadError(Exception):
    """A grammar failed to load; carries a source location when known."""

    def __init__(
        self,
        message: str,
        filename: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        self.message = message
        self.filename = filename
        self.line = line
        self.column = column
        prefix = ""
        if filename:
            prefix = filename
            if line is not None:
                prefix += f":{line}:{column if column is not None else 0}"
            prefix += ": "
        super().__init__(prefix + message)


class UnknownTagError(KeyError):
    """A morphological tag has no entry in the grammar's tag map."""


def _err(message: str, pos: tdl.Pos | None = None) -> LoadError:
    if pos is None:
        return LoadError(message)
    return LoadError(message, pos.filename, pos.line, pos.column)


def _unquote(literal: str) -> str:
    return re.sub(r"\\(.)", r"\1", literal[1:-1])


def _subgraph(fs: FeatureStructure, *path: str) -> FeatureStructure | None:
    """Copy out the substructure rooted at ``path`` (None when absent)."""
    start = fs.resolve(*path)
    if start is None:
        return None
    nodes: dict[int, tuple[str, dict[str, int]]] = {}
    stack = [start]
    while stack:
        nid = stack.pop()
        if nid in nodes:
            continue
        feats = dict(fs.features(nid))
        nodes[nid] = (fs.node_type(nid), feats)
        stack.extend(c for c in feats.values() if c not in nodes)
    return FeatureStructure.build(nodes, start)


# -- definition records ------------------------------------------------------


@dataclass(frozen=True)
class LexicalEntry:
    name: str
    lemma: str
    lexical_type: str
    stem: str
    predicate: str
    fs: FeatureStructure


@dataclass(frozen=True)
class LexicalRuleDef:
    name: str
    fs: FeatureStructure
    input_constraint: FeatureStructure
    output_delta: FeatureStructure
    inflectional: bool


@dataclass(frozen=True)
class PhraseRuleDef:
    name: str
    arity: int
    fs: FeatureStructure
    mother: FeatureStructure
    daughters: tuple[FeatureStructure, ...]

    @property
    def reentrancies(self) -> list[tuple[FeaturePath, ...]]:
        """Groups of paths (one per incoming edge) that share a node."""
        fs = self.fs
        first_path: dict[int, FeaturePath] = {}
        incoming: dict[int, list[tuple[FeaturePath, str]]] = {}
        queue: deque[tuple[int, FeaturePath]] = deque([(fs.root, ())])
        while queue:
            nid, path = queue.popleft()
            if nid in first_path:
                continue
            first_path[nid] = path
            for feat, child in sorted(fs.features(nid).items()):
                incoming.setdefault(child, []).append((path, feat))
                queue.append((child, path + (feat,)))
        groups = []
        for nid in sorted(incoming):
            edges = incoming[nid]
            if len(edges) > 1:
                groups.append(tuple(sorted(p + (f,) for p, f in edges)))
        return groups


# -- constraint factory ------------------------------------------------------


class _ConstraintFactory:
    """Expands type and instance definitions into feature structures."""

    def __init__(self, h: TypeHierarchy, type_defs: dict[str, tdl.Definition]):
        self.h = h
        self.type_defs = type_defs
        self._memo: dict[str, FeatureStructure] = {}
        self._busy: list[str] = []

    # -- public entry points ------------------------------------------

    def expand_type(self, name: str) -> FeatureStructure:
        """The full constraint implied by a type and all its ancestors."""
        if is_string_type(name):
            return FeatureStructure.atom(name)
        cached = self._memo.get(name)
        if cached is not None:
            return cached
        if name not in self.h:
            raise UnknownTypeError(name)
        if name in self._busy:
            chain = " -> ".join(self._busy + [name])
            raise LoadError(f"recursive constraint expansion: {chain}")
        self._busy.append(name)
        try:
            ws = Workspace(self.h)
            root = ws.new_node(name)
            d = self.type_defs.get(name)
            coref: dict[str, int] = {}
            pos = d.pos if d is not None else None
            if d is not None:
                for term in d.body.terms:
                    if isinstance(term, tdl.TypeTerm):
                        self._graft(ws, root, term.name, term.pos)
                    else:
                        self._apply_term(ws, root, term, coref)
            done = {ws.find(root): {name}}
            self._close(ws, root, name, pos, done)
            fs = self._finish(ws, root, name, pos)
        finally:
            self._busy.pop()
        self._memo[name] = fs
        return fs

    def build_instance(self, d: tdl.Definition) -> FeatureStructure:
        """Expand a lexical-entry/rule/root definition (not itself a type)."""
        if not d.parent_names:
            raise _err(f"definition {d.name!r} needs at least one parent type", d.pos)
        ws = Workspace(self.h)
        root = ws.new_node(self.h.root)
        coref: dict[str, int] = {}
        for term in d.body.terms:
            if isinstance(term, tdl.TypeTerm):
                self._graft(ws, root, term.name, term.pos)
            else:
                self._apply_term(ws, root, term, coref)
        self._close(ws, root, d.name, d.pos, {})
        return self._finish(ws, root, d.name, d.pos)

    # -- helpers --------------------------------------------------------

    def _node(self, ws: Workspace, type_name: str, pos: tdl.Pos | None) -> int:
        if type_name not in self.h:
            raise _err(f"unknown type {type_name!r}", pos)
        return ws.new_node(type_name)

    def _graft(self, ws: Workspace, node: int, type_name: str, pos: tdl.Pos | None) -> None:
        try:
            fs = self.expand_type(type_name)
        except UnknownTypeError:
            raise _err(f"unknown type {type_name!r}", pos) from None
        failure = ws.merge(node, ws.load(fs))
        if failure is not None:
            raise _err(f"constraint clash with {type_name!r}: {failure}", pos)

    def _apply_conjunction(
        self, ws: Workspace, node: int, conj: tdl.Conjunction, coref: dict[str, int]
    ) -> None:
        for term in conj.terms:
            self._apply_term(ws, node, term, coref)

    def _apply_term(self, ws: Workspace, node: int, term: tdl.Term, coref: dict[str, int]) -> None:
        if isinstance(term, tdl.TypeTerm):
            try:
                failure = ws.constrain(node, term.name)
            except UnknownTypeError:
                raise _err(f"unknown type {term.name!r}", term.pos) from None
            if failure is not None:
                raise _err(f"type clash: {failure}", term.pos)
        elif isinstance(term, tdl.StringTerm):
            failure = ws.constrain(node, term.value)
            if failure is not None:
                raise _err(f"type clash: {failure}", term.pos)
        elif isinstance(term, tdl.CorefTerm):
            prev = coref.get(term.tag)
            if prev is None:
                coref[term.tag] = ws.find(node)
            else:
                failure = ws.merge(prev, node)
                if failure is not None:
                    raise _err(f"coreference #{term.tag} clash: {failure}", term.pos)
        elif isinstance(term, tdl.AvmTerm):
            for path, value in term.attrvals:
                target = self._walk(ws, node, path, value.pos)
                self._apply_conjunction(ws, target, value, coref)
        elif isinstance(term, tdl.ListTerm):
            failure = ws.merge(node, self._build_list(ws, term, coref))
            if failure is not None:
                raise _err(f"list clash: {failure}", term.pos)
        elif isinstance(term, tdl.DiffListTerm):
            failure = ws.merge(node, self._build_dlist(ws, term, coref))
            if failure is not None:
                raise _err(f"difference-list clash: {failure}", term.pos)
        else:  # pragma: no cover - parser produces no other terms
            raise _err(f"unsupported term {term!r}")

    def _walk(self, ws: Workspace, node: int, path: FeaturePath, pos: tdl.Pos) -> int:
        """Descend a feature path, typing each host by the feature's introducer."""
        cur = node
        for feat in path:
            intro = self.h.introducer(feat)
            if intro is None:
                raise _err(f"feature {feat} is not declared by any type", pos)
            failure = ws.constrain(cur, intro)
            if failure is not None:
                raise _err(f"feature {feat} cannot live on this node: {failure}", pos)
            cur = ws.add_path(cur, (feat,))
        return cur

    def _build_list(self, ws: Workspace, term: tdl.ListTerm, coref: dict[str, int]) -> int:
        tail = self._node(ws, EMPTY_LIST, term.pos)
        for item in reversed(term.items):
            cell = self._node(ws, CONS, term.pos)
            self._apply_conjunction(ws, ws.add_path(cell, (FIRST,)), item, coref)
            ws.merge(ws.add_path(cell, (REST,)), tail)
            tail = cell
        return tail

    def _build_dlist(self, ws: Workspace, term: tdl.DiffListTerm, coref: dict[str, int]) -> int:
        dl = self._node(ws, DIFF_LIST, term.pos)
        tail = ws.add_path(dl, (DL_LAST,))
        for item in reversed(term.items):
            cell = self._node(ws, CONS, term.pos)
            self._apply_conjunction(ws, ws.add_path(cell, (FIRST,)), item, coref)
            ws.merge(ws.add_path(cell, (REST,)), tail)
            tail = cell
        ws.merge(ws.add_path(dl, (DL_LIST,)), tail)
        return dl

    def _reachable(self, ws: Workspace, root: int) -> list[int]:
        seen: list[int] = []
        marked: set[int] = set()
        stack = [ws.find(root)]
        while stack:
            rep = stack.pop()
            if rep in marked:
                continue
            marked.add(rep)
            seen.append(rep)
            for child in ws.feats_of(rep).values():
                c = ws.find(child)
                if c not in marked:
                    stack.append(c)
        return seen

    def _close(
        self,
        ws: Workspace,
        root: int,
        name: str,
        pos: tdl.Pos | None,
        done: dict[int, set[str]],
    ) -> None:
        """Graft every node's type constraint until a fixpoint is reached."""
        for _ in range(_MAX_EXPANSION_PASSES):
            before = self._snapshot(ws, root, name, pos)
            for rep in self._reachable(ws, root):
                t = ws.type_of(rep)
                if t == self.h.root or is_string_type(t):
                    continue
                applied = done.setdefault(rep, set())
                if any(self.h.subtype_of(g, t) for g in applied):
                    continue
                fs = self.expand_type(t)
                applied.add(t)
                if len(fs) == 1 and not fs.features(fs.root):
                    continue
                failure = ws.merge(rep, ws.load(fs))
                if failure is not None:
                    raise _err(f"constraint of type {t!r} clashes in {name!r}: {failure}", pos)
            if self._snapshot(ws, root, name, pos) == before:
                return
        raise _err(f"constraint expansion for {name!r} did not converge", pos)

    def _snapshot(self, ws: Workspace, root: int, name: str, pos: tdl.Pos | None) -> FeatureStructure:
        try:
            return ws.extract(root)
        except CycleError:
            raise _err(f"constraint for {name!r} is cyclic", pos) from None

    def _finish(
        self, ws: Workspace, root: int, name: str, pos: tdl.Pos | None
    ) -> FeatureStructure:
        fs = self._snapshot(ws, root, name, pos)
        problems = fs.validate(self.h)
        if problems:
            raise _err(f"ill-formed constraint for {name!r}: {problems[0]}", pos)
        return fs


# -- grammar definition ------------------------------------------------------


@dataclass
class GrammarDefinition:
    """An immutable, fully expanded grammar."""

    path: Path
    hierarchy: TypeHierarchy
    lexicon: dict[str, list[LexicalEntry]]
    entries: dict[str, LexicalEntry]
    lexrules: dict[str, LexicalRuleDef]
    phraserules: dict[str, PhraseRuleDef]
    root_conditions: dict[str, FeatureStructure]
    tagmap: dict[str, tuple[str, ...]]
    options: dict[str, str]
    flags: dict[str, bool]
    version: str
    factory: _ConstraintFactory = field(repr=False)
    _lookup_cache: dict[tuple[str, str], tuple[tuple[LexicalEntry, FeatureStructure], ...]] = field(
        default_factory=dict, repr=False
    )

    @property
    def root_condition(self) -> FeatureStructure:
        return next(iter(self.root_conditions.values()))

    def instantiate_type(self, name: str) -> FeatureStructure:
        return self.factory.expand_type(name)

    def lookup_entries(
        self, lemma: str, tag: str
    ) -> tuple[tuple[LexicalEntry, FeatureStructure], ...]:
        """All (entry, structure) pairs for a lemma under a tag's rule chain.

        Entries whose chain fails to unify at any step are dropped.
        """
        if tag not in self.tagmap:
            raise UnknownTagError(tag)
        key = (lemma, tag)
        cached = self._lookup_cache.get(key)
        if cached is not None:
            return cached
        out = []
        for entry in self.lexicon.get(lemma, ()):
            fs: FeatureStructure | None = entry.fs
            for rule_name in self.tagmap[tag]:
                fs = apply_lexrule(self.hierarchy, self.lexrules[rule_name].fs, fs)
                if fs is None:
                    break
            if fs is not None:
                out.append((entry, fs))
        result = tuple(out)
        self._lookup_cache[key] = result
        return result


def apply_lexrule(
    h: TypeHierarchy, rule_fs: FeatureStructure, dtr_fs: FeatureStructure
) -> FeatureStructure | None:
    """Plug a structure into a lexical rule's daughter; None on failure."""
    ws = Workspace(h)
    rule = ws.load(rule_fs)
    dtr = ws.get(rule, LEXRULE_DTR)
    assert dtr is not None
    if ws.merge(dtr, ws.load(dtr_fs)) is not None:
        return None
    try:
        return ws.extract(rule, frozenset({LEXRULE_DTR}))
    except CycleError:
        return None


# -- loader ------------------------------------------------------------------


def _parse_file(path: Path) -> list[tdl.Definition]:
    try:
        return tdl.parse_tdl(path.read_text(encoding="utf-8"), path.name)
    except tdl.TdlSyntaxError as e:
        raise LoadError(e.message, e.filename, e.line, e.column) from None


def _parse_options(text: str, filename: str) -> dict[str, str]:
    options: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise LoadError("expected key = value", filename, lineno, 1)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise LoadError("expected key = value", filename, lineno, 1)
        if key in options:
            raise LoadError(f"duplicate option {key!r}", filename, lineno, 1)
        options[key] = value
    return options


def _parse_tagmap(text: str, filename: str) -> dict[str, tuple[str, ...]]:
    tagmap: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith(";"):
            continue
        parts = raw.split("\t")
        tag = parts[0].strip()
        chain_field = parts[1].strip() if len(parts) > 1 else ""
        if not tag:
            raise LoadError("missing tag name", filename, lineno, 1)
        if tag in tagmap:
            raise LoadError(f"duplicate tag {tag!r}", filename, lineno, 1)
        tagmap[tag] = tuple(x.strip() for x in chain_field.split(",") if x.strip())
    return tagmap


class _Loader:
    def __init__(self, path: Path, overrides: dict[str, str] | None):
        self.path = path
        self.overrides = dict(overrides or {})

    def load(self) -> GrammarDefinition:
        for key, fname in _FILES.items():
            if not (self.path / fname).is_file():
                raise LoadError(f"missing file: {key}", str(self.path / fname))

        options = _parse_options(
            (self.path / _FILES["options"]).read_text(encoding="utf-8"), _FILES["options"]
        )
        options.update(self.overrides)
        flags, rule_gates, entry_gates = self._split_options(options)

        type_defs = self._named_defs(_parse_file(self.path / _FILES["types"]), "type")
        hierarchy = self._build_hierarchy(type_defs)
        factory = _ConstraintFactory(hierarchy, type_defs)
        for name in sorted(type_defs):
            factory.expand_type(name)

        entry_defs = self._named_defs(_parse_file(self.path / _FILES["lexicon"]), "entry")
        lexrule_defs = self._named_defs(_parse_file(self.path / _FILES["lexrules"]), "lexical rule")
        rule_defs = self._named_defs(_parse_file(self.path / _FILES["rules"]), "rule")
        root_defs = self._named_defs(_parse_file(self.path / _FILES["roots"]), "root condition")
        self._check_gates(rule_gates, rule_defs, flags, "rule")
        self._check_gates(entry_gates, entry_defs, flags, "entry")

        lexrules = {name: self._build_lexrule(factory, d) for name, d in lexrule_defs.items()}
        phraserules = {
            name: self._build_phrase_rule(factory, d)
            for name, d in rule_defs.items()
            if self._enabled(name, rule_gates, flags)
        }
        entries: dict[str, LexicalEntry] = {}
        lexicon: dict[str, list[LexicalEntry]] = {}
        for name, d in entry_defs.items():
            if not self._enabled(name, entry_gates, flags):
                continue
            entry = self._build_entry(factory, d)
            entries[name] = entry
            lexicon.setdefault(entry.lemma, []).append(entry)

        root_conditions = {name: factory.build_instance(d) for name, d in root_defs.items()}
        if not root_conditions:
            raise LoadError("no root conditions defined", _FILES["roots"])

        tagmap = _parse_tagmap(
            (self.path / _FILES["tagmap"]).read_text(encoding="utf-8"), _FILES["tagmap"]
        )
        for tag, chain in tagmap.items():
            for rule_name in chain:
                if rule_name not in lexrules:
                    raise LoadError(
                        f"tag {tag!r} references unknown lexical rule {rule_name!r}",
                        _FILES["tagmap"],
                    )

        return GrammarDefinition(
            path=self.path,
            hierarchy=hierarchy,
            lexicon=lexicon,
            entries=entries,
            lexrules=lexrules,
            phraserules=phraserules,
            root_conditions=root_conditions,
            tagmap=tagmap,
            options=options,
            flags={name: value == "on" for name, value in flags.items()},
            version=self._version(options),
            factory=factory,
        )

    # -- pieces ---------------------------------------------------------

    def _version(self, options: dict[str, str]) -> str:
        digest = hashlib.sha256()
        for fname in sorted(_FILES.values()):
            digest.update(fname.encode())
            digest.update(b"\0")
            digest.update((self.path / fname).read_bytes())
            digest.update(b"\0")
        digest.update(repr(sorted(options.items())).encode())
        return digest.hexdigest()

    def _split_options(
        self, options: dict[str, str]
    ) -> tuple[dict[str, str], dict[str, str], dict[str, str]]:
        flags: dict[str, str] = {}
        rule_gates: dict[str, str] = {}
        entry_gates: dict[str, str] = {}
        for key, value in options.items():
            if key.startswith("flag."):
                if value not in ("on", "off"):
                    raise LoadError(f"flag {key!r} must be on or off, not {value!r}", _FILES["options"])
                flags[key[len("flag."):]] = value
            elif key.startswith("gate.rule."):
                rule_gates[key[len("gate.rule."):]] = value
            elif key.startswith("gate.entry."):
                entry_gates[key[len("gate.entry."):]] = value
            else:
                raise LoadError(f"unknown option {key!r}", _FILES["options"])
        return flags, rule_gates, entry_gates

    def _check_gates(
        self,
        gates: dict[str, str],
        defs: dict[str, tdl.Definition],
        flags: dict[str, str],
        kind: str,
    ) -> None:
        for target, flag in gates.items():
            if target not in defs:
                raise LoadError(f"gate references unknown {kind} {target!r}", _FILES["options"])
            if flag not in flags:
                raise LoadError(f"gate for {target!r} references undeclared flag {flag!r}", _FILES["options"])

    @staticmethod
    def _enabled(name: str, gates: dict[str, str], flags: dict[str, str]) -> bool:
        flag = gates.get(name)
        return flag is None or flags[flag] == "on"

    def _named_defs(self, defs: list[tdl.Definition], kind: str) -> dict[str, tdl.Definition]:
        named: dict[str, tdl.Definition] = {}
        for d in defs:
            if d.name in named:
                raise _err(f"duplicate {kind} definition {d.name!r}", d.pos)
            named[d.name] = d
        return named

    def _build_hierarchy(self, type_defs: dict[str, tdl.Definition]) -> TypeHierarchy:
        parents: dict[str, tuple[str, ...]] = {}
        appropriateness: dict[str, dict[str, str]] = {}
        for name, d in type_defs.items():
            if name == TOP:
                raise _err(f"the root type {TOP} cannot be redefined", d.pos)
            if not d.parent_names:
                raise _err(f"type {name!r} needs at least one parent", d.pos)
            parents[name] = tuple(d.parent_names)
            declared: dict[str, str] = {}
            for avm in d.avms:
                for path, value in avm.attrvals:
                    if len(path) != 1 or path[0] in declared:
                        continue
                    restriction = self._declared_value(value)
                    if restriction is not None:
                        declared[path[0]] = restriction
            if declared:
                appropriateness[name] = declared
        h = TypeHierarchy(TOP, parents, appropriateness)
        report = h.validate()
        if not report.ok:
            raise LoadError(report.summary(), _FILES["types"])
        return h

    @staticmethod
    def _declared_value(value: tdl.Conjunction) -> str | None:
        for term in value.terms:
            if isinstance(term, tdl.TypeTerm):
                return term.name
            if isinstance(term, tdl.StringTerm):
                return STRING
            if isinstance(term, tdl.ListTerm):
                return CONS if term.items else EMPTY_LIST
            if isinstance(term, tdl.DiffListTerm):
                return DIFF_LIST
        return None

    def _build_entry(self, factory: _ConstraintFactory, d: tdl.Definition) -> LexicalEntry:
        fs = factory.build_instance(d)
        stem_type = fs.type_at("STEM")
        if stem_type is None or not is_string_type(stem_type):
            raise _err(f"entry {d.name!r} needs a STEM string", d.pos)
        pred_type = fs.type_at("KEYREL", "PRED")
        if pred_type is None or not is_string_type(pred_type):
            raise _err(f"entry {d.name!r} needs a KEYREL.PRED string", d.pos)
        stem = _unquote(stem_type)
        return LexicalEntry(
            name=d.name,
            lemma=stem,
            lexical_type=d.parent_names[0],
            stem=stem,
            predicate=_unquote(pred_type),
            fs=fs,
        )

    def _build_lexrule(self, factory: _ConstraintFactory, d: tdl.Definition) -> LexicalRuleDef:
        fs = factory.build_instance(d)
        dtr = _subgraph(fs, LEXRULE_DTR)
        if dtr is None:
            raise _err(f"lexical rule {d.name!r} needs a {LEXRULE_DTR} daughter", d.pos)
        ws = Workspace(factory.h)
        delta = ws.extract(ws.load(fs), frozenset({LEXRULE_DTR}))
        inflectional = INFL_RULE_TYPE in factory.h and factory.h.subtype_of(
            fs.node_type(fs.root), INFL_RULE_TYPE
        )
        return LexicalRuleDef(d.name, fs, dtr, delta, inflectional)

    def _build_phrase_rule(self, factory: _ConstraintFactory, d: tdl.Definition) -> PhraseRuleDef:
        fs = factory.build_instance(d)
        first = _subgraph(fs, PHRASE_DTRS[0])
        if first is None:
            raise _err(f"rule {d.name!r} needs a {PHRASE_DTRS[0]} daughter", d.pos)
        daughters = [first]
        second = _subgraph(fs, PHRASE_DTRS[1])
        if second is not None:
            daughters.append(second)
        ws = Workspace(factory.h)
        mother = ws.extract(ws.load(fs), DAUGHTER_FEATURES)
        return PhraseRuleDef(d.name, len(daughters), fs, mother, tuple(daughters))


def load_grammar(path: str | Path, options: dict[str, str] | None = None) -> GrammarDefinition:
    """Load and cross-check a grammar directory.

    ``options`` entries override the values in ``options.cfg`` (e.g.
    ``{"flag.depictive-vp-mod": "off"}``).
    """
    return _Loader(Path(path), options).load()


def instantiate_type(g: GrammarDefinition, name: str) -> FeatureStructure:
    """The maximally specific structure implied by a type and its ancestors."""
    return g.instantiate_type(name)


def lookup_lexemes(g: GrammarDefinition, lemma: str, tag: str) -> tuple[FeatureStructure, ...]:
    """Lexical structures for a lemma after folding the tag's rule chain."""
    return tuple(fs for _, fs in g.lookup_entries(lemma, tag))


def esfrag_path() -> Path:
    """Location of the bundled Spanish fragment grammar."""
    return Path(__file__).parent / "esfrag"
