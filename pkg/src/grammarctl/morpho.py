"""Tokenisation and table-driven morphological analysis.

The analyser stands in for a full morphological pipeline: a TSV table
maps surface forms to (lemma, tag) readings, the way an external
analyser would emit them.  ``analyze`` is pure lookup — unknown forms go
to the lattice's failure list rather than raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

_TERMINAL_PUNCT = ".?!,"
_TOKEN_RE = re.compile(r"[^\s]+")


@dataclass(frozen=True)
class Token:
    surface: str
    start: int  # character offset in the sentence
    end: int

    @property
    def lower(self) -> str:
        return self.surface.lower()


@dataclass(frozen=True)
class MorphReading:
    lemma: str
    tag: str


@dataclass
class TokenAnalysis:
    token: Token
    readings: tuple[MorphReading, ...]


@dataclass
class SentenceLattice:
    """Per-token readings for one sentence.

    ``analyses`` and ``failures`` partition the token sequence: every
    token appears in exactly one of the two, in surface order.
    """

    text: str
    analyses: list[TokenAnalysis] = field(default_factory=list)
    failures: list[Token] = field(default_factory=list)

    @property
    def tokens(self) -> list[Token]:
        toks = [a.token for a in self.analyses] + list(self.failures)
        return sorted(toks, key=lambda t: t.start)


def tokenize(text: str) -> list[Token]:
    """Whitespace tokenisation with terminal punctuation split off.

    A trailing ``.``, ``?``, ``!`` or ``,`` becomes its own token; case
    is preserved in the surface form.
    """
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        chunk, start = m.group(), m.start()
        while len(chunk) > 1 and chunk[-1] in _TERMINAL_PUNCT:
            # peel punctuation off the right edge, preserving offsets
            tokens.append(Token(chunk[-1], start + len(chunk) - 1, start + len(chunk)))
            chunk = chunk[:-1]
        tokens.append(Token(chunk, start, start + len(chunk)))
    tokens.sort(key=lambda t: t.start)
    return tokens


class MorphTable:
    """Surface-form lookup table; lookup is case-insensitive."""

    def __init__(self) -> None:
        self._readings: dict[str, list[MorphReading]] = {}

    @classmethod
    def from_rows(cls, rows: list[tuple[str, str, str]]) -> "MorphTable":
        table = cls()
        for surface, lemma, tag in rows:
            table.add(surface, lemma, tag)
        return table

    def add(self, surface: str, lemma: str, tag: str) -> None:
        bucket = self._readings.setdefault(surface.lower(), [])
        reading = MorphReading(lemma, tag)
        if reading not in bucket:
            bucket.append(reading)

    def lookup(self, surface: str) -> tuple[MorphReading, ...]:
        return tuple(self._readings.get(surface.lower(), ()))

    def __len__(self) -> int:
        return sum(len(v) for v in self._readings.values())

    def tags(self) -> set[str]:
        return {r.tag for rs in self._readings.values() for r in rs}

    def lemmas(self) -> set[str]:
        return {r.lemma for rs in self._readings.values() for r in rs}


def load_table(path: str | Path) -> MorphTable:
    """Read a ``surface TAB lemma TAB tag`` table; ``;`` lines are comments."""
    path = Path(path)
    table = MorphTable()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != 3 or not all(fields):
            raise ValueError(f"{path.name}:{lineno}: expected surface<TAB>lemma<TAB>tag")
        table.add(*fields)
    return table


def analyze(table: MorphTable, sentence: str) -> SentenceLattice:
    """Tokenise and look up every token; no side effects, no surprises."""
    lattice = SentenceLattice(sentence)
    for token in tokenize(sentence):
        readings = table.lookup(token.surface)
        if readings:
            lattice.analyses.append(TokenAnalysis(token, readings))
        else:
            lattice.failures.append(token)
    return lattice
