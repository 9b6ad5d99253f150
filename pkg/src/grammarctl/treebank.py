"""Treebanking profiles: parse results plus accept/reject decisions on disk.

A profile is a directory of line-delimited JSON files
(``items.jsonl``, ``results.jsonl``, ``decisions.jsonl``) plus a
``run.json`` header recording the grammar version and options.
Decisions are append-only; the latest record per item wins.  Writes
take a file lock so concurrent deciders cannot interleave records.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock

from .chart import DerivationTree, ParserLimits, enumerate_readings, parse
from .grammar import GrammarDefinition
from .morpho import MorphTable, analyze
from .mrs import equivalent, extract_mrs, format_mrs, parse_mrs

LOCK_TIMEOUT_ENV = "GRAMMARCTL_PROFILE_LOCK_TIMEOUT"
READING_CAP = 50

CATEGORIES = (
    "gold-preserved",
    "gold-lost",
    "coverage-gained",
    "coverage-lost",
    "still-no-parse",
    "reject-preserved",
    "reject-violated",
    "unverified",
)
REGRESSION_CATEGORIES = frozenset({"gold-lost", "coverage-lost"})


@dataclass(frozen=True)
class SuiteItem:
    id: str
    wf: int
    sentence: str


@dataclass(frozen=True)
class Decision:
    item_id: str
    decision: str  # "accept" | "reject"
    reading: int | None = None
    note: str = ""


@dataclass(frozen=True)
class ReadingRecord:
    index: int
    derivation: dict
    mrs: str


@dataclass(frozen=True)
class ItemResult:
    item_id: str
    status: str
    token_count: int
    readings: tuple[ReadingRecord, ...] = ()
    gaps: tuple[str, ...] = ()
    truncated: bool = False


@dataclass(frozen=True)
class Comparison:
    item_id: str
    category: str


@dataclass
class Profile:
    path: Path
    run: dict
    items: dict[str, SuiteItem] = field(default_factory=dict)
    results: dict[str, ItemResult] = field(default_factory=dict)
    decision_log: list[Decision] = field(default_factory=list)

    @property
    def decisions(self) -> dict[str, Decision]:
        return {d.item_id: d for d in self.decision_log}


def load_suite(path: str | Path) -> tuple[SuiteItem, ...]:
    """Read an ``id TAB wf TAB sentence`` suite; ``;`` lines are comments."""
    items = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        fields = line.split("\t")
        if len(fields) != 3 or fields[1] not in ("0", "1"):
            raise ValueError(f"{Path(path).name}:{lineno}: expected id<TAB>wf<TAB>sentence")
        items.append(SuiteItem(fields[0], int(fields[1]), fields[2]))
    return tuple(items)


def load_decisions(path: str | Path) -> tuple[Decision, ...]:
    """Read an ``id TAB decision TAB reading TAB note`` decision table."""
    out = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        fields = line.split("\t")
        if len(fields) != 4 or fields[1] not in ("accept", "reject"):
            raise ValueError(
                f"{Path(path).name}:{lineno}: expected id<TAB>accept|reject<TAB>reading<TAB>note"
            )
        reading = None if fields[2] == "-" else int(fields[2])
        note = "" if fields[3] == "-" else fields[3]
        out.append(Decision(fields[0], fields[1], reading, note))
    return tuple(out)


def load_expectations(path: str | Path) -> dict[str, str]:
    """Read an ``id TAB category`` comparison expectation table."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or fields[1] not in CATEGORIES:
            raise ValueError(f"{Path(path).name}:{lineno}: expected id<TAB>category")
        out[fields[0]] = fields[1]
    return out


def tree_to_json(tree: DerivationTree) -> dict:
    if tree.is_leaf:
        return {"label": tree.label, "token": tree.token, "tag": tree.tag}
    return {"label": tree.label, "children": [tree_to_json(c) for c in tree.children]}


def tree_from_json(data: dict) -> DerivationTree:
    if "children" not in data:
        return DerivationTree(data["label"], token=data["token"], tag=data["tag"])
    return DerivationTree(
        data["label"], children=tuple(tree_from_json(c) for c in data["children"])
    )


def _lock(path: Path) -> FileLock:
    timeout = float(os.environ.get(LOCK_TIMEOUT_ENV, "10"))
    return FileLock(path / "profile.lock", timeout=timeout)


def _write_jsonl(path: Path, records) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def _read_jsonl(path: Path) -> list[dict]:
    if not path.exists():
        return []
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]


def parse_item(
    g: GrammarDefinition,
    table: MorphTable,
    item: SuiteItem,
    limits: ParserLimits | None = None,
    reading_cap: int = READING_CAP,
) -> ItemResult:
    lattice = analyze(table, item.sentence)
    outcome = parse(g, lattice, limits)
    readings, truncated = enumerate_readings(outcome.forest, cap=reading_cap)
    records = tuple(
        ReadingRecord(i, tree_to_json(r.tree), format_mrs(extract_mrs(r.fs, g.hierarchy)))
        for i, r in enumerate(readings)
    )
    return ItemResult(
        item.id, outcome.status, len(lattice.tokens), records, outcome.gaps, truncated
    )


def create_profile(
    path: str | Path,
    g: GrammarDefinition,
    table: MorphTable,
    items: tuple[SuiteItem, ...],
    limits: ParserLimits | None = None,
    suite_name: str = "",
) -> Profile:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    run = {
        "grammar-version": g.version,
        "options": {k: bool(v) for k, v in g.flags.items()},
        "suite": suite_name,
        "created-at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    results = {item.id: parse_item(g, table, item, limits) for item in items}
    with _lock(path):
        (path / "run.json").write_text(
            json.dumps(run, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        _write_jsonl(
            path / "items.jsonl",
            (
                {"item-id": i.id, "wf": i.wf, "sentence": i.sentence}
                for i in items
            ),
        )
        _write_jsonl(
            path / "results.jsonl",
            (
                {
                    "item-id": r.item_id,
                    "status": r.status,
                    "token-count": r.token_count,
                    "gap-tokens": list(r.gaps),
                    "truncated": r.truncated,
                    "readings": [
                        {"reading-index": x.index, "derivation": x.derivation, "mrs": x.mrs}
                        for x in r.readings
                    ],
                }
                for r in results.values()
            ),
        )
        (path / "decisions.jsonl").touch()
    return Profile(path, run, {i.id: i for i in items}, results)


def open_profile(path: str | Path) -> Profile:
    path = Path(path)
    run = json.loads((path / "run.json").read_text(encoding="utf-8"))
    items = {
        r["item-id"]: SuiteItem(r["item-id"], r["wf"], r["sentence"])
        for r in _read_jsonl(path / "items.jsonl")
    }
    results = {}
    for r in _read_jsonl(path / "results.jsonl"):
        results[r["item-id"]] = ItemResult(
            r["item-id"],
            r["status"],
            r["token-count"],
            tuple(
                ReadingRecord(x["reading-index"], x["derivation"], x["mrs"])
                for x in r["readings"]
            ),
            tuple(r["gap-tokens"]),
            r["truncated"],
        )
    decisions = [
        Decision(r["item-id"], r["decision"], r["reading-index"], r["note"])
        for r in _read_jsonl(path / "decisions.jsonl")
    ]
    return Profile(path, run, items, results, decisions)


def record_decision(profile: Profile, decision: Decision) -> None:
    """Append a decision; earlier records for the item stay but lose."""
    if decision.item_id not in profile.items:
        raise KeyError(f"unknown item {decision.item_id!r}")
    result = profile.results.get(decision.item_id)
    if decision.decision == "accept":
        if decision.reading is None:
            raise ValueError("accepting requires a reading index")
        if result is None or decision.reading >= len(result.readings):
            raise ValueError(f"{decision.item_id} has no reading {decision.reading}")
    with _lock(profile.path):
        with (profile.path / "decisions.jsonl").open("a", encoding="utf-8") as fh:
            record = {
                "item-id": decision.item_id,
                "decision": decision.decision,
                "reading-index": decision.reading,
                "note": decision.note,
            }
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    profile.decision_log.append(decision)


def _classify(current: ItemResult | None, gold: ItemResult | None, decision: Decision | None) -> str:
    gold_parsed = gold is not None and gold.status == "parsed"
    if current is None or current.status == "resource-limit":
        return "unverified"
    parsed = current.status == "parsed"
    if not gold_parsed:
        return "coverage-gained" if parsed else "still-no-parse"
    if decision is not None and decision.decision == "accept":
        if not parsed:
            return "gold-lost"
        accepted = parse_mrs(gold.readings[decision.reading].mrs)
        for reading in current.readings:
            if equivalent(parse_mrs(reading.mrs), accepted):
                return "gold-preserved"
        return "gold-lost"
    if decision is not None and decision.decision == "reject":
        return "reject-violated" if parsed else "reject-preserved"
    return "unverified" if parsed else "coverage-lost"


def compare_profiles(current: Profile, gold: Profile) -> tuple[Comparison, ...]:
    """Classify every gold item by what the current profile did to it."""
    decisions = gold.decisions
    return tuple(
        Comparison(
            item_id,
            _classify(current.results.get(item_id), gold.results.get(item_id), decisions.get(item_id)),
        )
        for item_id in gold.items
    )


def has_regressions(comparisons: tuple[Comparison, ...]) -> bool:
    return any(c.category in REGRESSION_CATEGORIES for c in comparisons)
