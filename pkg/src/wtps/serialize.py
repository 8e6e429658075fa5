"""Stable tabular serialization of results to CSV and JSON.

Column orders are part of the public contract and never change within a
schema version: downstream plotting and diffing rely on byte-stable output.
Floats serialize at full precision via ``repr``.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Mapping, Sequence

from .graph import DeletionSeries
from .scoring import GrowthLabel, RankEntry, ScoreCard
from .stats import DistributionSummary, SweepEntry

SCORE_COLUMNS = ("repo_id", "indicator", "interval_index", "value")
RANK_COLUMNS = ("repo_id", "indicator", "value", "rank")
SWEEP_COLUMNS = (
    "indicator", "interval_days", "slope", "intercept", "pearson_r", "sample_count",
)
GROWTH_COLUMNS = (
    "repo_id", "indicator", "pattern",
    "peak_cumulative", "final_cumulative", "positive_fraction",
)
CORRELATION_COLUMNS = (
    "property", "slope", "intercept", "pearson_r", "sample_count",
)
SUMMARY_COLUMNS = (
    "feature", "minimum", "first_quartile", "median", "third_quartile",
    "maximum", "mean", "outlier_count",
)
DELETION_COLUMNS = ("step", "removed_repo_id", "coefficient")

Row = list
Table = tuple[tuple[str, ...], list[Row]]


def score_table(cards: Iterable[ScoreCard]) -> Table:
    """Interval rows per repository followed by one "overall" row."""
    rows: list[Row] = []
    for card in cards:
        for t, value in enumerate(card.interval_scores):
            rows.append([card.repo_id, "wtps", t, value])
        rows.append([card.repo_id, "wtps", "overall", card.overall])
    return SCORE_COLUMNS, rows


def rank_table(entries: Iterable[RankEntry], indicator: str) -> Table:
    rows = [[e.repo_id, indicator, e.value, e.rank] for e in entries]
    return RANK_COLUMNS, rows


def sweep_table(entries: Iterable[SweepEntry]) -> Table:
    rows = [
        [
            e.indicator.value,
            e.interval_days,
            e.result.slope,
            e.result.intercept,
            e.result.pearson_r,
            e.result.sample_count,
        ]
        for e in entries
    ]
    return SWEEP_COLUMNS, rows


def growth_table(labels: Iterable[GrowthLabel]) -> Table:
    rows = [
        [
            label.repo_id,
            label.indicator.value,
            label.pattern.value,
            label.peak_cumulative,
            label.final_cumulative,
            label.positive_fraction,
        ]
        for label in labels
    ]
    return GROWTH_COLUMNS, rows


def correlation_table(rows_in: Iterable[Mapping]) -> Table:
    rows = [[r[c] for c in CORRELATION_COLUMNS] for r in rows_in]
    return CORRELATION_COLUMNS, rows


def summary_table(summaries: Mapping[str, DistributionSummary]) -> Table:
    rows = [
        [
            feature,
            s.minimum,
            s.first_quartile,
            s.median,
            s.third_quartile,
            s.maximum,
            s.mean,
            s.outlier_count,
        ]
        for feature, s in summaries.items()
    ]
    return SUMMARY_COLUMNS, rows


def deletion_table(series: DeletionSeries) -> Table:
    """Step 0 is the intact graph, so its removed_repo_id is empty."""
    rows: list[Row] = [[0, "", series.values[0]]]
    for step, (removed, value) in enumerate(
        zip(series.removed, series.values[1:]), start=1
    ):
        rows.append([step, removed, value])
    return DELETION_COLUMNS, rows


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def to_json(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    records = [dict(zip(header, row)) for row in rows]
    return json.dumps(records, indent=2, ensure_ascii=False) + "\n"
