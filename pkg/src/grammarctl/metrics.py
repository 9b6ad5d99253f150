"""Evaluation metrics over a treebanked profile.

Rates follow the learner-corpus evaluation convention: coverage and
accuracy are computed over the well-formed items (parsed, respectively
parsed-and-accepted), overgeneration over the ill-formed ones, and
ambiguity over everything that parsed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .treebank import Profile

FIELDS = (
    "length",
    "items",
    "coverage",
    "accuracy",
    "overgeneration",
    "ambiguity-mean",
    "limit-hits",
    "unverified",
)


@dataclass(frozen=True)
class ItemRecord:
    """The facts one item contributes to the metrics."""

    length: int
    wf: int
    status: str
    readings: int
    decision: str | None  # "accept" | "reject" | None


@dataclass(frozen=True)
class MetricsRow:
    label: str
    items: int
    coverage: float | None
    accuracy: float | None
    overgeneration: float | None
    ambiguity_mean: float | None
    limit_hits: int
    unverified: int

    def cells(self) -> tuple[str, ...]:
        return (
            self.label,
            str(self.items),
            _ratio(self.coverage),
            _ratio(self.accuracy),
            _ratio(self.overgeneration),
            _ratio(self.ambiguity_mean),
            str(self.limit_hits),
            str(self.unverified),
        )


def _ratio(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def profile_records(profile: Profile) -> tuple[ItemRecord, ...]:
    decisions = profile.decisions
    records = []
    for item_id, item in profile.items.items():
        result = profile.results[item_id]
        decision = decisions.get(item_id)
        records.append(
            ItemRecord(
                result.token_count,
                item.wf,
                result.status,
                len(result.readings),
                decision.decision if decision else None,
            )
        )
    return tuple(records)


def _row(label: str, records: list[ItemRecord]) -> MetricsRow:
    wf = [r for r in records if r.wf == 1]
    ill = [r for r in records if r.wf == 0]
    parsed = [r for r in records if r.status == "parsed"]
    accepted = [r for r in wf if r.status == "parsed" and r.decision == "accept"]
    return MetricsRow(
        label,
        len(records),
        len([r for r in wf if r.status == "parsed"]) / len(wf) if wf else None,
        len(accepted) / len(wf) if wf else None,
        len([r for r in ill if r.status == "parsed"]) / len(ill) if ill else None,
        sum(r.readings for r in parsed) / len(parsed) if parsed else None,
        len([r for r in records if r.status == "resource-limit"]),
        len([r for r in parsed if r.decision is None]),
    )


def compute_metrics(records: Iterable[ItemRecord]) -> tuple[MetricsRow, ...]:
    """One row per token length plus a closing ALL row."""
    records = list(records)
    rows = [
        _row(str(length), [r for r in records if r.length == length])
        for length in sorted({r.length for r in records})
    ]
    rows.append(_row("ALL", records))
    return tuple(rows)


def summary_line(rows: tuple[MetricsRow, ...]) -> str:
    total = rows[-1]
    return (
        f"coverage {_ratio(total.coverage)}"
        f"  accuracy {_ratio(total.accuracy)}"
        f"  overgeneration {_ratio(total.overgeneration)}"
    )


def render_records(rows: tuple[MetricsRow, ...]) -> str:
    lines = ["\t".join(FIELDS)]
    lines += ["\t".join(row.cells()) for row in rows]
    return "\n".join(lines)


def render_table(rows: tuple[MetricsRow, ...]) -> str:
    table = [FIELDS] + [row.cells() for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(FIELDS))]
    lines = []
    for line in table:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip())
    return "\n".join(lines)
