"""Syntax-level tests for the TDL-inspired description language."""

from __future__ import annotations

import pytest

from grammarctl.tdl import (
    AvmTerm,
    Conjunction,
    CorefTerm,
    DiffListTerm,
    ListTerm,
    StringTerm,
    TdlSyntaxError,
    TypeTerm,
    parse_tdl,
)


def parse_one(text: str):
    defs = parse_tdl(text, "inline.tdl")
    assert len(defs) == 1
    return defs[0]


class TestDefinitions:
    def test_parent_only(self):
        d = parse_one("noun := head .")
        assert d.name == "noun"
        assert d.parent_names == ["head"]
        assert d.avms == []

    def test_multiple_parents(self):
        d = parse_one("ditrans-verb := verb-lxm & three-arg .")
        assert d.parent_names == ["verb-lxm", "three-arg"]

    def test_several_definitions_and_comments(self):
        text = """
        ; the head sorts
        noun := head .
        verb := head .  ; trailing note
        fin-verb := verb & [ VFORM fin ] .
        """
        defs = parse_tdl(text, "inline.tdl")
        assert [d.name for d in defs] == ["noun", "verb", "fin-verb"]
        assert defs[2].parent_names == ["verb"]

    def test_definition_position_tracking(self):
        text = "a := b .\n\nc := d .\n"
        defs = parse_tdl(text, "g.tdl")
        assert defs[0].pos.line == 1
        assert defs[1].pos.line == 3
        assert defs[1].pos.filename == "g.tdl"


class TestAvms:
    def test_dotted_path(self):
        d = parse_one("v := lexeme & [ SS.HOOK.INDEX event ] .")
        (avm,) = d.avms
        (path, value) = avm.attrvals[0]
        assert path == ("SS", "HOOK", "INDEX")
        assert isinstance(value.terms[0], TypeTerm)
        assert value.terms[0].name == "event"

    def test_multiple_attrvals(self):
        d = parse_one("x := t & [ A a, B.C b, D d ] .")
        paths = [p for p, _ in d.avms[0].attrvals]
        assert paths == [("A",), ("B", "C"), ("D",)]

    def test_value_conjunction_with_nested_avm(self):
        d = parse_one("x := t & [ HEAD verb & [ VFORM fin ] ] .")
        (_, value) = d.avms[0].attrvals[0]
        assert isinstance(value.terms[0], TypeTerm)
        assert isinstance(value.terms[1], AvmTerm)
        inner = value.terms[1].attrvals[0]
        assert inner[0] == ("VFORM",)

    def test_empty_avm(self):
        d = parse_one("x := t & [ ] .")
        assert d.avms[0].attrvals == []

    def test_coreference_tags(self):
        d = parse_one("x := t & [ F #subj, G #subj, H #2 ] .")
        tags = [v.terms[0].tag for _, v in d.avms[0].attrvals]
        assert tags == ["subj", "subj", "2"]
        assert all(isinstance(v.terms[0], CorefTerm) for _, v in d.avms[0].attrvals)

    def test_coref_conjoined_with_constraint(self):
        d = parse_one("x := t & [ F #1 & [ G a ] ] .")
        (_, value) = d.avms[0].attrvals[0]
        assert isinstance(value.terms[0], CorefTerm)
        assert isinstance(value.terms[1], AvmTerm)


class TestListsAndStrings:
    def test_list_items(self):
        d = parse_one("x := t & [ SUBJ < synsem, synsem > ] .")
        (_, value) = d.avms[0].attrvals[0]
        lst = value.terms[0]
        assert isinstance(lst, ListTerm)
        assert len(lst.items) == 2

    def test_empty_list(self):
        d = parse_one("x := t & [ SUBJ < > ] .")
        assert d.avms[0].attrvals[0][1].terms[0].items == []

    def test_diff_list(self):
        d = parse_one("x := t & [ RELS <! ep, ep !> ] .")
        (_, value) = d.avms[0].attrvals[0]
        dl = value.terms[0]
        assert isinstance(dl, DiffListTerm)
        assert len(dl.items) == 2

    def test_empty_diff_list(self):
        d = parse_one("x := t & [ HCONS <! !> ] .")
        dl = d.avms[0].attrvals[0][1].terms[0]
        assert isinstance(dl, DiffListTerm)
        assert dl.items == []

    def test_list_items_may_be_complex(self):
        d = parse_one("x := t & [ COMPS < synsem & [ HEAD noun ], #c > ] .")
        lst = d.avms[0].attrvals[0][1].terms[0]
        assert isinstance(lst.items[0].terms[1], AvmTerm)
        assert isinstance(lst.items[1].terms[0], CorefTerm)

    def test_string_values_keep_their_quotes(self):
        d = parse_one('x := t & [ PRED "persona" ] .')
        term = d.avms[0].attrvals[0][1].terms[0]
        assert isinstance(term, StringTerm)
        assert term.value == '"persona"'

    def test_string_escapes_pass_through(self):
        d = parse_one(r'x := t & [ PRED "a\"b" ] .')
        assert d.avms[0].attrvals[0][1].terms[0].value == r'"a\"b"'


class TestErrors:
    def test_missing_terminator(self):
        with pytest.raises(TdlSyntaxError, match="expected '.' to close"):
            parse_tdl("a := b", "g.tdl")

    def test_missing_assign(self):
        with pytest.raises(TdlSyntaxError, match=":="):
            parse_tdl("a b .", "g.tdl")

    def test_unexpected_character_reports_position(self):
        with pytest.raises(TdlSyntaxError) as exc:
            parse_tdl("a := b .\nc := ! .", "g.tdl")
        assert exc.value.line == 2
        assert exc.value.column == 6
        assert exc.value.filename == "g.tdl"

    def test_unclosed_avm(self):
        with pytest.raises(TdlSyntaxError):
            parse_tdl("a := [ F x .", "g.tdl")

    def test_error_message_carries_location_prefix(self):
        with pytest.raises(TdlSyntaxError, match=r"g\.tdl:1:"):
            parse_tdl("a := .", "g.tdl")


class TestRealisticFragment:
    def test_parses_a_small_grammar_file(self):
        text = """
        ; core signature
        sign := *top* & [ SS synsem, ORTH *string* ] .
        synsem := *top* & [ HEAD head, HOOK hook ] .
        phrase := sign & [ DTR1 sign ] .

        head-comp := phrase &
          [ SS [ HEAD #h, HOOK #k ],
            DTR1 [ SS [ HEAD #h & verb, HOOK #k,
                        COMPS < #c > ] ],
            DTR2 #c ] .
        """
        defs = parse_tdl(text, "rules.tdl")
        assert [d.name for d in defs] == ["sign", "synsem", "phrase", "head-comp"]
        hc = defs[3]
        assert hc.parent_names == ["phrase"]
        assert len(hc.avms[0].attrvals) == 3
