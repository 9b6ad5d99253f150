"""Type hierarchy validation and GLB behaviour.

The GLB oracle here is deliberately naive: intersect full descendant
sets and scan for maxima by pairwise comparison.  The production path
precomputes a table, so the two implementations are independent.
"""

from __future__ import annotations

import pytest

from grammarctl.hierarchy import (
    TOP,
    HierarchyError,
    TypeHierarchy,
    UnknownTypeError,
    validate_hierarchy,
)


def brute_force_glb(h: TypeHierarchy, a: str, b: str) -> str | None:
    """Oracle: maxima of the intersection of descendant closures."""

    def down(t: str) -> set[str]:
        out = {t}
        frontier = [t]
        while frontier:
            cur = frontier.pop()
            for child in h.types:
                if cur in h.parents.get(child, ()) and child not in out:
                    out.add(child)
                    frontier.append(child)
        return out

    def below(x: str, y: str) -> bool:
        return x in down(y)

    common = down(a) & down(b)
    maxima = [t for t in common if not any(t != s and below(t, s) for s in common)]
    assert len(maxima) <= 1, f"oracle hit a non-BCPO pair ({a}, {b}): {maxima}"
    return maxima[0] if maxima else None


def small_hierarchy() -> TypeHierarchy:
    # The agreement fragment: png bundles person/number with gender.
    parents = {
        "png": [TOP],
        "pernum": [TOP],
        "3sg": ["pernum"],
        "3pl": ["pernum"],
        "gender": [TOP],
        "masc": ["gender"],
        "fem": ["gender"],
        "neut": ["gender"],
    }
    approp = {"png": {"PERNUM": "pernum", "GEN": "gender"}}
    return TypeHierarchy(TOP, parents, approp)


class TestValidation:
    def test_valid_hierarchy_passes(self):
        h = small_hierarchy()
        report = validate_hierarchy(h)
        assert report.ok
        assert report.summary() == "hierarchy valid"

    def test_cycle_detected(self):
        h = TypeHierarchy(TOP, {"a": ["b"], "b": ["a"]})
        report = validate_hierarchy(h)
        assert not report.ok
        assert report.cycles
        flat = {t for cyc in report.cycles for t in cyc}
        assert {"a", "b"} <= flat

    def test_self_loop_detected(self):
        h = TypeHierarchy(TOP, {"a": ["a"]})
        report = validate_hierarchy(h)
        assert report.cycles

    def test_second_root_detected(self):
        h = TypeHierarchy(TOP, {"a": [TOP], "b": []})
        report = validate_hierarchy(h)
        assert "b" in report.extra_roots

    def test_unknown_parent_detected(self):
        h = TypeHierarchy(TOP, {"a": ["ghost"]})
        report = validate_hierarchy(h)
        assert ("a", "ghost") in report.unknown_parents

    def test_bcpo_violation_reports_pair_and_maximal_bounds(self):
        # a and b share the unordered subtypes c and d: no unique GLB.
        h = TypeHierarchy(
            TOP,
            {
                "a": [TOP],
                "b": [TOP],
                "c": ["a", "b"],
                "d": ["a", "b"],
            },
        )
        report = validate_hierarchy(h)
        assert not report.ok
        assert report.glb_conflicts == [("a", "b", frozenset({"c", "d"}))]
        with pytest.raises(HierarchyError):
            h.glb("a", "b")

    def test_multiple_feature_introducers_rejected(self):
        h = TypeHierarchy(
            TOP,
            {"a": [TOP], "b": [TOP]},
            {"a": {"F": TOP}, "b": {"F": TOP}},
        )
        report = validate_hierarchy(h)
        assert any("introduced by more than one type" in msg for msg in report.appropriateness_conflicts)

    def test_feature_narrowing_must_stay_below_introduction(self):
        h = TypeHierarchy(
            TOP,
            {"v1": [TOP], "v2": [TOP], "a": [TOP], "b": ["a"]},
            {"a": {"F": "v1"}, "b": {"F": "v2"}},
        )
        report = validate_hierarchy(h)
        assert any("widens value type" in msg for msg in report.appropriateness_conflicts)

    def test_legal_narrowing_accepted(self):
        h = TypeHierarchy(
            TOP,
            {"v1": [TOP], "v2": ["v1"], "a": [TOP], "b": ["a"]},
            {"a": {"F": "v1"}, "b": {"F": "v2"}},
        )
        assert validate_hierarchy(h).ok
        assert h.introducer("F") == "a"
        assert h.feature_restriction("b", "F") == "v2"
        assert h.feature_restriction("a", "F") == "v1"


class TestGlb:
    def test_sibling_atoms_are_incompatible(self):
        h = small_hierarchy()
        assert h.glb("fem", "masc") is None

    def test_glb_with_supertype(self):
        h = small_hierarchy()
        assert h.glb("gender", "masc") == "masc"
        assert h.glb("masc", "gender") == "masc"
        assert h.glb(TOP, "png") == "png"

    def test_glb_reflexive(self):
        h = small_hierarchy()
        for t in h.types:
            assert h.glb(t, t) == t

    def test_unknown_type_raises(self):
        h = small_hierarchy()
        with pytest.raises(UnknownTypeError):
            h.glb("masc", "nosuch")
        with pytest.raises(UnknownTypeError):
            h.subtype_of("nosuch", TOP)

    def test_multiple_inheritance_glb(self):
        h = TypeHierarchy(
            TOP,
            {"a": [TOP], "b": [TOP], "ab": ["a", "b"]},
        )
        assert h.glb("a", "b") == "ab"

    def test_matches_brute_force_oracle_on_small_hierarchy(self):
        h = small_hierarchy()
        for a in sorted(h.types):
            for b in sorted(h.types):
                assert h.glb(a, b) == brute_force_glb(h, a, b), (a, b)

    def test_string_literals_behave_as_string_subtypes(self):
        h = TypeHierarchy(TOP, {"*string*": [TOP], "a": [TOP]})
        assert h.glb('"persona"', '"persona"') == '"persona"'
        assert h.glb('"persona"', '"abuelo"') is None
        assert h.glb('"persona"', "*string*") == '"persona"'
        assert h.glb('"persona"', TOP) == '"persona"'
        assert h.glb('"persona"', "a") is None
        assert h.subtype_of('"persona"', "*string*")
        assert not h.subtype_of("*string*", '"persona"')


class TestOrderQueries:
    def test_subtype_of(self):
        h = small_hierarchy()
        assert h.subtype_of("masc", "gender")
        assert h.subtype_of("masc", TOP)
        assert not h.subtype_of("gender", "masc")
        assert h.subtype_of("png", "png")

    def test_descendants_and_ancestors(self):
        h = small_hierarchy()
        assert h.descendants("gender") == frozenset({"gender", "masc", "fem", "neut"})
        assert h.ancestors("masc") == frozenset({"masc", "gender", TOP})

    def test_licensed_features(self):
        h = small_hierarchy()
        assert h.licensed_features("png") == {"PERNUM": "pernum", "GEN": "gender"}
        assert h.licenses("png", "GEN")
        assert not h.licenses("gender", "GEN")
        assert h.introducer("GEN") == "png"
