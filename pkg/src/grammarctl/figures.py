"""Figures accompanying a metrics report, rendered to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import ItemRecord, MetricsRow


def render_figures(
    rows: tuple[MetricsRow, ...],
    records: tuple[ItemRecord, ...],
    directory: str | Path,
) -> list[Path]:
    """Write the per-length rates chart and the readings histogram."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [
        _rates_by_length(rows, directory / "rates-by-length.png"),
        _readings_histogram(records, directory / "readings-histogram.png"),
    ]


def _rates_by_length(rows: tuple[MetricsRow, ...], path: Path) -> Path:
    buckets = [r for r in rows if r.label != "ALL"]
    labels = [r.label for r in buckets]
    series = (
        ("coverage", [r.coverage for r in buckets]),
        ("accuracy", [r.accuracy for r in buckets]),
        ("overgeneration", [r.overgeneration for r in buckets]),
    )
    width = 0.8 / len(series)
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, (name, values) in enumerate(series):
        xs = [x + i * width for x in range(len(labels))]
        ax.bar(xs, [0.0 if v is None else v for v in values], width=width, label=name)
    ax.set_xticks([x + width for x in range(len(labels))])
    ax.set_xticklabels(labels)
    ax.set_xlabel("sentence length (tokens)")
    ax.set_ylabel("rate")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def _readings_histogram(records: tuple[ItemRecord, ...], path: Path) -> Path:
    counts = [r.readings for r in records if r.status == "parsed"]
    top = max(counts, default=1)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.hist(counts, bins=[x - 0.5 for x in range(1, top + 2)], rwidth=0.9)
    ax.set_xlabel("readings per parsed item")
    ax.set_ylabel("items")
    ax.set_xticks(range(1, top + 1))
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
