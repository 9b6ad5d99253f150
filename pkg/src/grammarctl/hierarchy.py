"""Type hierarchies: partial orders of types with greatest-lower-bound computation.

A hierarchy is a DAG of types under a single root, ordered by subtyping
(``a`` is a subtype of ``b`` when ``b`` is reachable from ``a`` through
parent links).  Grammars require the hierarchy to be a bounded complete
partial order: any two types with a common subtype have a *unique* most
general common subtype, their greatest lower bound.  Validation rejects
hierarchies that break this, reporting the offending pair together with
its maximal common lower bounds so the grammarian can see what to fix.

String literals (type names written ``"like this"``) act as implicit
leaf subtypes of the ``*string*`` type and never appear in the declared
type table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

TOP = "*top*"
STRING = "*string*"


class HierarchyError(Exception):
    """Raised when an operation requires a valid hierarchy and it is not."""


class UnknownTypeError(KeyError):
    """Raised when a type name is not declared in the hierarchy."""


def is_string_type(name: str) -> bool:
    return name.startswith('"') and name.endswith('"') and len(name) >= 2


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_hierarchy`.

    ``glb_conflicts`` holds ``(a, b, maximal_lower_bounds)`` triples for
    pairs with common subtypes but no unique greatest lower bound.
    """

    cycles: list[tuple[str, ...]] = field(default_factory=list)
    extra_roots: list[str] = field(default_factory=list)
    unknown_parents: list[tuple[str, str]] = field(default_factory=list)
    glb_conflicts: list[tuple[str, str, frozenset[str]]] = field(default_factory=list)
    appropriateness_conflicts: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.cycles
            or self.extra_roots
            or self.unknown_parents
            or self.glb_conflicts
            or self.appropriateness_conflicts
        )

    def summary(self) -> str:
        if self.ok:
            return "hierarchy valid"
        lines = []
        for cyc in self.cycles:
            lines.append("cycle: " + " -> ".join(cyc))
        for t in self.extra_roots:
            lines.append(f"type without parents besides the root: {t}")
        for t, p in self.unknown_parents:
            lines.append(f"unknown parent {p!r} of type {t!r}")
        for a, b, lbs in self.glb_conflicts:
            ms = ", ".join(sorted(lbs))
            lines.append(f"no unique greatest lower bound for ({a}, {b}): maximal common subtypes {{{ms}}}")
        lines.extend(self.appropriateness_conflicts)
        return "\n".join(lines)


class TypeHierarchy:
    """A finite type table with subtyping, GLB lookup and appropriateness.

    ``parents`` maps each non-root type to its (possibly multiple)
    immediate supertypes.  ``appropriateness`` maps a type to the features
    it introduces or narrows, with the most general value type allowed.
    """

    def __init__(
        self,
        root: str = TOP,
        parents: Mapping[str, Iterable[str]] | None = None,
        appropriateness: Mapping[str, Mapping[str, str]] | None = None,
    ) -> None:
        self.root = root
        self.parents: dict[str, tuple[str, ...]] = {
            t: tuple(ps) for t, ps in (parents or {}).items()
        }
        self.appropriateness: dict[str, dict[str, str]] = {
            t: dict(fs) for t, fs in (appropriateness or {}).items()
        }
        self._report: ValidationReport | None = None
        self._up: dict[str, frozenset[str]] = {}
        self._down: dict[str, frozenset[str]] = {}
        self._glb: dict[tuple[str, str], str | None] = {}
        self._introducer: dict[str, str] = {}

    # -- basic views ---------------------------------------------------

    @property
    def types(self) -> set[str]:
        ts = set(self.parents)
        ts.add(self.root)
        return ts

    def __contains__(self, name: str) -> bool:
        return name == self.root or name in self.parents or is_string_type(name)

    def __len__(self) -> int:
        return len(self.types)

    def children(self, name: str) -> list[str]:
        return [t for t, ps in self.parents.items() if name in ps]

    # -- validation ----------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._report is not None:
            return self._report
        report = ValidationReport()
        declared = self.types
        for t, ps in self.parents.items():
            for p in ps:
                if p not in declared:
                    report.unknown_parents.append((t, p))
            if not ps and t != self.root:
                report.extra_roots.append(t)
        self._find_cycles(report)
        if report.cycles or report.unknown_parents:
            self._report = report
            return report

        # Transitive closures; computable once the graph is acyclic.
        up: dict[str, frozenset[str]] = {}

        def ancestors(t: str) -> frozenset[str]:
            got = up.get(t)
            if got is None:
                acc: set[str] = {t}
                for p in self.parents.get(t, ()):
                    acc |= ancestors(p)
                got = up[t] = frozenset(acc)
            return got

        for t in declared:
            ancestors(t)
        for t in declared:
            if self.root not in up[t]:
                report.extra_roots.append(t)
        down: dict[str, set[str]] = {t: {t} for t in declared}
        for t in declared:
            for a in up[t]:
                down[a].add(t)
        self._up = up
        self._down = {t: frozenset(s) for t, s in down.items()}

        # Bounded completeness: every consistent pair needs a unique GLB.
        ordered = sorted(declared)
        for i, a in enumerate(ordered):
            for b in ordered[i:]:
                common = self._down[a] & self._down[b]
                if not common:
                    self._glb[(a, b)] = None
                    continue
                maxima = {t for t in common if not (up[t] & common) - {t}}
                if len(maxima) == 1:
                    self._glb[(a, b)] = next(iter(maxima))
                else:
                    report.glb_conflicts.append((a, b, frozenset(maxima)))

        self._validate_appropriateness(report)
        self._report = report
        return report

    def _find_cycles(self, report: ValidationReport) -> None:
        WHITE, GREY, BLACK = 0, 1, 2
        color = {t: WHITE for t in self.types}
        stack: list[str] = []

        def visit(t: str) -> None:
            color[t] = GREY
            stack.append(t)
            for p in self.parents.get(t, ()):
                if p not in color:
                    continue
                if color[p] == GREY:
                    cyc = tuple(stack[stack.index(p):] + [p])
                    report.cycles.append(cyc)
                elif color[p] == WHITE:
                    visit(p)
            stack.pop()
            color[t] = BLACK

        for t in sorted(color):
            if color[t] == WHITE:
                visit(t)

    def _validate_appropriateness(self, report: ValidationReport) -> None:
        declared = self.types
        by_feature: dict[str, list[str]] = {}
        for t, feats in self.appropriateness.items():
            if t not in declared:
                report.appropriateness_conflicts.append(
                    f"appropriateness declared for unknown type {t!r}"
                )
                continue
            for f, v in feats.items():
                if v not in declared and not is_string_type(v):
                    report.appropriateness_conflicts.append(
                        f"feature {f} on {t} has unknown value type {v!r}"
                    )
                by_feature.setdefault(f, []).append(t)
        for f, ts in sorted(by_feature.items()):
            maxima = [t for t in ts if not any(t != s and s in self._up.get(t, frozenset()) for s in ts)]
            if len(maxima) != 1:
                report.appropriateness_conflicts.append(
                    f"feature {f} introduced by more than one type: {', '.join(sorted(maxima))}"
                )
                continue
            self._introducer[f] = maxima[0]
            intro_val = self.appropriateness[maxima[0]][f]
            for t in ts:
                if t == maxima[0]:
                    continue
                v = self.appropriateness[t][f]
                if not self._subtype_closure(v, intro_val):
                    report.appropriateness_conflicts.append(
                        f"feature {f} on {t} widens value type: {v} is not below {intro_val}"
                    )

    def _subtype_closure(self, a: str, b: str) -> bool:
        if is_string_type(a):
            return a == b or b in (STRING, self.root)
        return b in self._up.get(a, frozenset((a,)))

    def _require_valid(self) -> None:
        report = self.validate()
        if not report.ok:
            raise HierarchyError(report.summary())

    # -- ordering operations --------------------------------------------

    def subtype_of(self, a: str, b: str) -> bool:
        """True when ``a`` is ``b`` or lies below it."""
        self._require_valid()
        if is_string_type(a):
            return a == b or b in (STRING, self.root)
        if is_string_type(b):
            return False
        if a not in self._up:
            raise UnknownTypeError(a)
        if b not in self._down:
            raise UnknownTypeError(b)
        return b in self._up[a]

    def glb(self, a: str, b: str) -> str | None:
        """Greatest lower bound of two types, or None when incompatible."""
        self._require_valid()
        if is_string_type(a) or is_string_type(b):
            if a == b:
                return a
            for s, t in ((a, b), (b, a)):
                if is_string_type(s) and t in (STRING, self.root):
                    return s
            return None
        key = (a, b) if a <= b else (b, a)
        try:
            return self._glb[key]
        except KeyError:
            missing = a if a not in self._down else b
            raise UnknownTypeError(missing) from None

    def descendants(self, t: str) -> frozenset[str]:
        self._require_valid()
        if t not in self._down:
            raise UnknownTypeError(t)
        return self._down[t]

    def ancestors(self, t: str) -> frozenset[str]:
        self._require_valid()
        if t not in self._up:
            raise UnknownTypeError(t)
        return self._up[t]

    # -- appropriateness lookups ----------------------------------------

    def introducer(self, feature: str) -> str | None:
        """The unique type that introduces ``feature``, if any."""
        self._require_valid()
        return self._introducer.get(feature)

    def feature_restriction(self, t: str, feature: str) -> str | None:
        """Most specific declared value type for ``feature`` at type ``t``."""
        self._require_valid()
        best: str | None = None
        for anc in self._up.get(t, frozenset()):
            v = self.appropriateness.get(anc, {}).get(feature)
            if v is not None and (best is None or self._subtype_closure(v, best)):
                best = v
        return best

    def licensed_features(self, t: str) -> dict[str, str]:
        """All features appropriate for ``t``, with their value restrictions."""
        self._require_valid()
        out: dict[str, str] = {}
        for anc in self._up.get(t, frozenset()):
            for f, v in self.appropriateness.get(anc, {}).items():
                cur = out.get(f)
                if cur is None or self._subtype_closure(v, cur):
                    out[f] = v
        return out

    def licenses(self, t: str, feature: str) -> bool:
        """True when a node of type ``t`` may carry ``feature``."""
        self._require_valid()
        intro = self._introducer.get(feature)
        if intro is None:
            return False
        if is_string_type(t):
            return False
        return intro in self._up.get(t, frozenset())


def validate_hierarchy(h: TypeHierarchy) -> ValidationReport:
    """Validate a hierarchy, returning a report of every violation found."""
    return h.validate()
