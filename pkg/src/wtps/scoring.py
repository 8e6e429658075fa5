"""Community popularity weights, weighted total popularity scores, rankings,
and growth-pattern classification.

The weighted total popularity score (WTPS) of a repository values each fork
or star gain by how much of the whole community's fork/star activity fell in
the same time interval: an interval's fork weight is that interval's share of
all fork deltas corpus-wide (star weights analogous), and a repository's
score is the weight-scaled sum of its own per-interval gains.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import IntervalOutOfRange
from .model import BinnedCounts, Corpus, EventKind, bin_events


class Indicator(Enum):
    """Popularity measures a repository can be ranked under."""

    FORKS = "forks"
    STARS = "stars"
    WATCHERS = "watchers"
    WTPS = "wtps"


SNAPSHOT_FIELDS: Mapping[Indicator, str] = {
    Indicator.FORKS: "forks_total",
    Indicator.STARS: "stars_total",
    Indicator.WATCHERS: "watchers_total",
}


@dataclass(frozen=True, slots=True)
class WeightTable:
    """Per-interval fork and star weights for a corpus.

    Weights produced by :func:`compute_weights` sum to 1 per indicator when
    the corpus-wide total is positive and are all zero otherwise. Tables from
    :func:`unit_weights` (the isolated-repository mode) are exempt from the
    sum rule by design.
    """

    fork_weights: tuple[float, ...]
    star_weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.fork_weights) != len(self.star_weights):
            raise ValueError("fork and star weight sequences must align")

    @property
    def interval_count(self) -> int:
        return len(self.fork_weights)


def compute_weights(binned: BinnedCounts) -> WeightTable:
    """Derive community weights from binned counts.

    fork_weights[t] is the fraction of all fork deltas that fell in interval
    t, and likewise for stars. A non-positive corpus-wide total makes that
    indicator's weights all zero, so a missing indicator contributes nothing
    rather than inventing uniform signal.
    """

    def normalize(per_interval: np.ndarray) -> tuple[float, ...]:
        total = int(per_interval.sum())
        if total <= 0:
            return (0.0,) * len(per_interval)
        return tuple(int(c) / total for c in per_interval)

    return WeightTable(
        fork_weights=normalize(binned.interval_totals(EventKind.FORK)),
        star_weights=normalize(binned.interval_totals(EventKind.STAR)),
    )


def unit_weights(interval_count: int) -> WeightTable:
    """All-ones weights: scores a repository as if it stood alone.

    With every weight forced to 1 the overall score collapses to the plain
    sum of fork and star deltas.
    """
    ones = (1.0,) * interval_count
    return WeightTable(fork_weights=ones, star_weights=ones)


@dataclass(frozen=True, slots=True)
class ScoreCard:
    """Per-interval and overall weighted scores for one repository."""

    repo_id: str
    interval_scores: tuple[float, ...]
    overall: float


def _check_table(binned: BinnedCounts, weights: WeightTable) -> None:
    if weights.interval_count != binned.interval_count:
        raise ValueError(
            f"weight table covers {weights.interval_count} intervals, "
            f"binned counts cover {binned.interval_count}"
        )


def wtps_interval(
    binned: BinnedCounts, weights: WeightTable, repo_id: str, t: int
) -> float:
    """Weighted score of one repository in one interval."""
    _check_table(binned, weights)
    if not 0 <= t < binned.interval_count:
        raise IntervalOutOfRange(
            f"interval {t} outside [0, {binned.interval_count})"
        )
    row = binned.row_index(repo_id)
    return (
        weights.fork_weights[t] * int(binned.forks[row, t])
        + weights.star_weights[t] * int(binned.stars[row, t])
    )


def wtps_overall(
    binned: BinnedCounts, weights: WeightTable, repo_id: str
) -> ScoreCard:
    """Overall weighted score: the sum of all interval scores."""
    _check_table(binned, weights)
    row = binned.row_index(repo_id)
    wf = np.asarray(weights.fork_weights, dtype=np.float64)
    ws = np.asarray(weights.star_weights, dtype=np.float64)
    scores = binned.forks[row] * wf + binned.stars[row] * ws
    return ScoreCard(
        repo_id=repo_id,
        interval_scores=tuple(float(v) for v in scores),
        overall=float(scores.sum()),
    )


def score_all(binned: BinnedCounts, weights: WeightTable) -> list[ScoreCard]:
    """Score every repository; output ordered by repo_id."""
    _check_table(binned, weights)
    scores = _score_matrix(binned, weights)
    overall = scores.sum(axis=1)
    return [
        ScoreCard(
            repo_id=rid,
            interval_scores=tuple(float(v) for v in scores[i]),
            overall=float(overall[i]),
        )
        for i, rid in enumerate(binned.repo_ids)
    ]


def _score_matrix(binned: BinnedCounts, weights: WeightTable) -> np.ndarray:
    wf = np.asarray(weights.fork_weights, dtype=np.float64)
    ws = np.asarray(weights.star_weights, dtype=np.float64)
    return binned.forks * wf + binned.stars * ws


@dataclass(frozen=True, slots=True)
class RankEntry:
    """One row of a ranking: 1-based competition rank (ties share the lower
    rank number; tie order within equal values is ascending repo_id)."""

    repo_id: str
    value: float
    rank: int


def rank(
    corpus: Corpus,
    indicator: Indicator,
    *,
    weights: WeightTable | None = None,
    binned: BinnedCounts | None = None,
) -> list[RankEntry]:
    """Rank all repositories under one indicator, descending by value.

    Count indicators rank by snapshot totals; WTPS ranks by the overall
    weighted score, recomputing community weights from the corpus unless a
    ``weights`` table (e.g. unit weights) is supplied.
    """
    if indicator is Indicator.WTPS:
        if binned is None:
            binned = bin_events(corpus)
        if weights is None:
            weights = compute_weights(binned)
        values: dict[str, float] = {
            card.repo_id: card.overall for card in score_all(binned, weights)
        }
    else:
        attr = SNAPSHOT_FIELDS[indicator]
        values = {r.repo_id: getattr(r, attr) for r in corpus.repos}

    ordered = sorted(values, key=lambda rid: (-values[rid], rid))
    entries: list[RankEntry] = []
    current_rank = 0
    previous: float | None = None
    for position, rid in enumerate(ordered, start=1):
        if previous is None or values[rid] != previous:
            current_rank = position
            previous = values[rid]
        entries.append(RankEntry(repo_id=rid, value=values[rid], rank=current_rank))
    return entries


class GrowthPattern(Enum):
    """The three popularity-growth trajectories."""

    STAGNANT = "stagnant"
    GAINED_THEN_LOST = "gained_then_lost"
    SUSTAINED_GROWTH = "sustained_growth"


@dataclass(frozen=True, slots=True)
class GrowthThresholds:
    """Tunable cutoffs for growth classification.

    min_activity: total |delta| below which a repository is stagnant.
    loss_fraction: peak-to-final cumulative drop beyond which popularity
        counts as gained-then-lost.
    growth_fraction: minimum share of active (nonzero-delta) intervals with a
        positive delta for sustained growth.
    """

    min_activity: int = 10
    loss_fraction: float = 0.2
    growth_fraction: float = 0.6


@dataclass(frozen=True, slots=True)
class GrowthLabel:
    """Classification outcome plus the evidence it was decided on."""

    repo_id: str
    indicator: Indicator
    pattern: GrowthPattern
    peak_cumulative: int
    final_cumulative: int
    positive_fraction: float


def classify_growth(
    binned: BinnedCounts,
    repo_id: str,
    indicator: Indicator,
    thresholds: GrowthThresholds = GrowthThresholds(),
) -> GrowthLabel:
    """Label one repository's growth trajectory for forks or stars.

    Rules, in order: below the activity floor -> stagnant; cumulative peak
    exceeding the final cumulative count by more than ``loss_fraction`` ->
    gained-then-lost; positive deltas in at least ``growth_fraction`` of the
    repo's active intervals -> sustained growth; anything else -> stagnant.
    """
    if indicator not in (Indicator.FORKS, Indicator.STARS):
        raise ValueError("growth classification covers forks and stars only")
    kind = EventKind.FORK if indicator is Indicator.FORKS else EventKind.STAR
    deltas = binned.deltas(repo_id, kind)

    cumulative = np.cumsum(deltas)
    peak = int(cumulative.max()) if len(cumulative) else 0
    final = int(cumulative[-1]) if len(cumulative) else 0
    active = int(np.count_nonzero(deltas))
    positive = int(np.count_nonzero(deltas > 0))
    positive_fraction = positive / active if active else 0.0

    def label(pattern: GrowthPattern) -> GrowthLabel:
        return GrowthLabel(
            repo_id=repo_id,
            indicator=indicator,
            pattern=pattern,
            peak_cumulative=peak,
            final_cumulative=final,
            positive_fraction=positive_fraction,
        )

    total_activity = int(np.abs(deltas).sum())
    if total_activity < thresholds.min_activity:
        return label(GrowthPattern.STAGNANT)
    if peak > 0 and (peak - final) / peak > thresholds.loss_fraction:
        return label(GrowthPattern.GAINED_THEN_LOST)
    if positive_fraction >= thresholds.growth_fraction:
        return label(GrowthPattern.SUSTAINED_GROWTH)
    return label(GrowthPattern.STAGNANT)
