"""Shared fixtures: the bundled grammar and learner-set profiles.

Profiles are expensive to build (each parses the full learner set), so they
are session-scoped. Tests must not record decisions on them; writable flows
copy the directory first.
"""

from __future__ import annotations

import pytest

from grammarctl.grammar import esfrag_path, load_grammar
from grammarctl.morpho import load_table
from grammarctl.treebank import create_profile, load_decisions, load_suite, record_decision

SUITES = esfrag_path() / "suites"


@pytest.fixture(scope="session")
def frag():
    return load_grammar(esfrag_path())


@pytest.fixture(scope="session")
def table():
    return load_table(esfrag_path() / "morph.tsv")


@pytest.fixture(scope="session")
def gold(frag, table, tmp_path_factory):
    profile = create_profile(
        tmp_path_factory.mktemp("profiles") / "gold",
        frag,
        table,
        load_suite(SUITES / "learner20.tsv"),
        suite_name="learner20",
    )
    for decision in load_decisions(SUITES / "learner20-gold.tsv"):
        record_decision(profile, decision)
    return profile


@pytest.fixture(scope="session")
def flags_off(table, tmp_path_factory):
    g = load_grammar(
        esfrag_path(),
        {"flag.depictive-vp-mod": "off", "flag.querer-long-distance": "off"},
    )
    return create_profile(
        tmp_path_factory.mktemp("profiles") / "off",
        g,
        table,
        load_suite(SUITES / "learner20.tsv"),
        suite_name="learner20",
    )
