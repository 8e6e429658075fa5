"""Pearson correlation, least-squares lines, interval-width sweeps, and
distribution summaries.

Correlation and regression are computed from centered sums with ``math.fsum``
for accuracy; constant input raises :class:`DegenerateInput` rather than
returning a silent zero that would corrupt correlation reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateInput, EmptyInput, LengthMismatch
from .model import Corpus, bin_events
from .scoring import Indicator, SNAPSHOT_FIELDS, compute_weights, score_all

DEFAULT_SWEEP_DAYS: tuple[int, ...] = (30, 21, 14, 7)


@dataclass(frozen=True, slots=True)
class RegressionResult:
    """Simple least-squares line plus the product-moment coefficient."""

    slope: float
    intercept: float
    pearson_r: float
    sample_count: int


def _centered_sums(
    x: Sequence[float], y: Sequence[float]
) -> tuple[float, float, float, float, float, int]:
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise DegenerateInput("need at least 2 paired samples")
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    sxx = math.fsum((xi - mean_x) ** 2 for xi in x)
    syy = math.fsum((yi - mean_y) ** 2 for yi in y)
    sxy = math.fsum((xi - mean_x) * (yi - mean_y) for xi, yi in zip(x, y))
    return mean_x, mean_y, sxx, syy, sxy, n


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation coefficient, clamped to [-1, 1].

    Raises:
        LengthMismatch: series lengths differ.
        DegenerateInput: fewer than 2 samples, or either series is constant.
    """
    _, _, sxx, syy, sxy, _ = _centered_sums(x, y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("correlation is undefined for a constant series")
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def ols_line(x: Sequence[float], y: Sequence[float]) -> RegressionResult:
    """Least-squares line y = slope*x + intercept, with pearson_r attached.

    Error behaviour matches :func:`pearson`: constant input on either side is
    rejected because the attached coefficient would be undefined.
    """
    mean_x, mean_y, sxx, syy, sxy, n = _centered_sums(x, y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("regression is undefined for a constant series")
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    return RegressionResult(
        slope=slope, intercept=intercept, pearson_r=r, sample_count=n
    )


@dataclass(frozen=True, slots=True)
class SweepEntry:
    """Regression of one snapshot indicator on the weighted score for one
    interval width."""

    indicator: Indicator
    interval_days: int
    result: RegressionResult


def interval_sweep(
    corpus: Corpus, interval_days_list: Sequence[int] = DEFAULT_SWEEP_DAYS
) -> list[SweepEntry]:
    """Recompute grid, weights, and scores per interval width, then regress
    each snapshot indicator (forks, stars, watchers) on the overall score.

    x is the weighted score, y the snapshot total, so the slope reads as
    indicator units gained per score unit. Indicator/width pairs whose input
    is constant (e.g. a corpus with no watcher variation) are omitted rather
    than poisoning the whole sweep.
    """
    snapshots = {
        ind: [float(getattr(r, attr)) for r in corpus.repos]
        for ind, attr in SNAPSHOT_FIELDS.items()
    }
    entries: list[SweepEntry] = []
    for days in interval_days_list:
        regridded = corpus.regrid(days)
        binned = bin_events(regridded)
        weights = compute_weights(binned)
        scores = [card.overall for card in score_all(binned, weights)]
        for indicator in (Indicator.FORKS, Indicator.STARS, Indicator.WATCHERS):
            try:
                result = ols_line(scores, snapshots[indicator])
            except DegenerateInput:
                continue
            entries.append(
                SweepEntry(indicator=indicator, interval_days=days, result=result)
            )
    return entries


@dataclass(frozen=True, slots=True)
class DistributionSummary:
    """Five-number summary plus mean and an IQR-rule outlier count."""

    minimum: float
    first_quartile: float
    median: float
    third_quartile: float
    maximum: float
    mean: float
    outlier_count: int


def _quantile(ordered: Sequence[float], q: float) -> float:
    """Linear interpolation between closest ranks on a pre-sorted sequence."""
    position = (len(ordered) - 1) * q
    low = math.floor(position)
    high = math.ceil(position)
    if low == high:
        return float(ordered[low])
    fraction = position - low
    return ordered[low] + fraction * (ordered[high] - ordered[low])


def summarize(values: Iterable[float]) -> DistributionSummary:
    """Summarize a distribution; outliers lie beyond 1.5*IQR of the quartiles.

    Raises:
        EmptyInput: no values supplied.
    """
    ordered = sorted(float(v) for v in values)
    if not ordered:
        raise EmptyInput("cannot summarize an empty value sequence")
    q1 = _quantile(ordered, 0.25)
    q2 = _quantile(ordered, 0.50)
    q3 = _quantile(ordered, 0.75)
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    outliers = sum(1 for v in ordered if v < low_fence or v > high_fence)
    return DistributionSummary(
        minimum=ordered[0],
        first_quartile=q1,
        median=q2,
        third_quartile=q3,
        maximum=ordered[-1],
        mean=math.fsum(ordered) / len(ordered),
        outlier_count=outliers,
    )


def repo_age_days(corpus: Corpus) -> dict[str, float]:
    """Age of each repository in days at the corpus capture time."""
    captured = corpus.captured_at
    assert captured is not None  # resolved at construction
    return {
        r.repo_id: (captured - r.created_at) / 86_400.0 for r in corpus.repos
    }
