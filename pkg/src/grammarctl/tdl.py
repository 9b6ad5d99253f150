"""Parser for the TDL-inspired grammar description syntax.

A definition has the shape::

    name := parent & [ PATH.TO.FEAT value, F #tag ] .

The right-hand side is a conjunction of terms: type names, quoted
strings, ``#tag`` coreferences, attribute-value matrices, lists
``< a, b >`` (sugar for FIRST/REST cons chains closed by ``elist``) and
difference lists ``<! a, b !>`` (sugar for a LIST/LAST pair, so bags can
be concatenated by unification).  ``;`` starts a comment.  This module
only builds syntax trees; the grammar loader in :mod:`grammarctl.grammar`
turns them into feature structures.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class TdlSyntaxError(Exception):
    def __init__(self, message: str, filename: str, line: int, column: int):
        super().__init__(f"{filename}:{line}:{column}: {message}")
        self.filename = filename
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class Pos:
    filename: str
    line: int
    column: int


# -- terms ---------------------------------------------------------------


@dataclass
class TypeTerm:
    name: str
    pos: Pos


@dataclass
class StringTerm:
    value: str
    pos: Pos


@dataclass
class CorefTerm:
    tag: str
    pos: Pos


@dataclass
class AvmTerm:
    attrvals: list[tuple[tuple[str, ...], "Conjunction"]]
    pos: Pos


@dataclass
class ListTerm:
    items: list["Conjunction"]
    pos: Pos


@dataclass
class DiffListTerm:
    items: list["Conjunction"]
    pos: Pos


Term = TypeTerm | StringTerm | CorefTerm | AvmTerm | ListTerm | DiffListTerm


@dataclass
class Conjunction:
    terms: list[Term]
    pos: Pos


@dataclass
class Definition:
    name: str
    body: Conjunction
    pos: Pos

    @property
    def parent_names(self) -> list[str]:
        return [t.name for t in self.body.terms if isinstance(t, TypeTerm)]

    @property
    def avms(self) -> list[AvmTerm]:
        return [t for t in self.body.terms if isinstance(t, AvmTerm)]


# -- lexer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<assign>:=)
  | (?P<dlopen><!)
  | (?P<dlclose>!>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<coref>\#[\w-]+)
  | (?P<punct>[\[\]<>&,])
  | (?P<dot>\.)
  | (?P<ident>[^\s\[\]<>&,#";!.]+)
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    value: str
    pos: Pos


def _lex(text: str, filename: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise TdlSyntaxError(f"unexpected character {text[i]!r}", filename, line, col)
        kind = m.lastgroup or ""
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, Pos(filename, line, col)))
        nl = value.count("\n")
        if nl:
            line += nl
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        i += len(value)
    tokens.append(Token("eof", "", Pos(filename, line, col)))
    return tokens


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.tokens = tokens
        self.i = 0
        self.filename = filename

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.next()
        if tok.kind != kind and tok.value != kind:
            raise TdlSyntaxError(
                f"expected {what or kind}, found {tok.value!r}",
                tok.pos.filename,
                tok.pos.line,
                tok.pos.column,
            )
        return tok

    def parse_definitions(self) -> list[Definition]:
        defs = []
        while self.peek().kind != "eof":
            name = self.expect("ident", "a definition name")
            self.expect("assign", "':='")
            body = self.parse_conjunction()
            dot = self.next()
            if dot.kind != "dot":
                raise TdlSyntaxError(
                    f"expected '.' to close definition {name.value!r}, found {dot.value!r}",
                    dot.pos.filename,
                    dot.pos.line,
                    dot.pos.column,
                )
            defs.append(Definition(name.value, body, name.pos))
        return defs

    def parse_conjunction(self) -> Conjunction:
        pos = self.peek().pos
        terms = [self.parse_term()]
        while self.peek().value == "&":
            self.next()
            terms.append(self.parse_term())
        return Conjunction(terms, pos)

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            return TypeTerm(tok.value, tok.pos)
        if tok.kind == "string":
            self.next()
            return StringTerm(tok.value, tok.pos)
        if tok.kind == "coref":
            self.next()
            return CorefTerm(tok.value[1:], tok.pos)
        if tok.value == "[":
            return self.parse_avm()
        if tok.value == "<":
            return self.parse_list()
        if tok.kind == "dlopen":
            return self.parse_dlist()
        raise TdlSyntaxError(
            f"expected a term, found {tok.value!r}", tok.pos.filename, tok.pos.line, tok.pos.column
        )

    def parse_avm(self) -> AvmTerm:
        opener = self.expect("[")
        attrvals: list[tuple[tuple[str, ...], Conjunction]] = []
        if self.peek().value != "]":
            while True:
                path = self.parse_path()
                value = self.parse_conjunction()
                attrvals.append((path, value))
                if self.peek().value == ",":
                    self.next()
                    continue
                break
        self.expect("]")
        return AvmTerm(attrvals, opener.pos)

    def parse_path(self) -> tuple[str, ...]:
        names = [self.expect("ident", "a feature name").value]
        while self.peek().kind == "dot":
            # Only a dot immediately followed by another identifier extends
            # the path; the lexer has already ruled out other cases here.
            self.next()
            names.append(self.expect("ident", "a feature name").value)
        return tuple(names)

    def parse_list(self) -> ListTerm:
        opener = self.expect("<")
        items = []
        if self.peek().value != ">":
            while True:
                items.append(self.parse_conjunction())
                if self.peek().value == ",":
                    self.next()
                    continue
                break
        self.expect(">")
        return ListTerm(items, opener.pos)

    def parse_dlist(self) -> DiffListTerm:
        opener = self.expect("dlopen")
        items = []
        if self.peek().kind != "dlclose":
            while True:
                items.append(self.parse_conjunction())
                if self.peek().value == ",":
                    self.next()
                    continue
                break
        self.expect("dlclose", "'!>'")
        return DiffListTerm(items, opener.pos)


def parse_tdl(text: str, filename: str = "<string>") -> list[Definition]:
    """Parse a TDL source text into a list of definitions."""
    tokens = _lex(text, filename)
    return _Parser(tokens, filename).parse_definitions()
