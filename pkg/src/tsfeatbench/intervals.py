"""Random-interval transforms: summary aggregations and the 22-feature bank
evaluated over sampled subseries.

Interval sets are sampled once from the train split's length m and reused
for the test split; the transforms themselves are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .dataset import TimeSeriesDataset
from .errors import SeriesTooShort
from .features import FeatureMatrix
from .featurebank import FEATURE_NAMES, compute_bank

SUMMARY_AGGREGATIONS = (
    "mean", "min", "max", "sum", "med", "std", "count", "skew",
    "quant_25", "quant_75",
)


@dataclass(frozen=True)
class IntervalSet:
    """Sampled (start, end) index pairs, end exclusive, each of length >= 3."""

    intervals: tuple
    seed: int

    def __len__(self):
        return len(self.intervals)


def sample_intervals(m: int, n_intervals: int, min_len: int = 3,
                     seed: int = 0) -> IntervalSet:
    """Sample intervals with replacement; deterministic given the seed.

    Start is uniform on [0, m - min_len], end uniform on
    [start + min_len, m].
    """
    if m < min_len:
        raise SeriesTooShort(f"m={m} shorter than min_len={min_len}")
    if n_intervals < 1:
        raise SeriesTooShort(f"n_intervals must be >= 1, got {n_intervals}")
    rng = np.random.default_rng(seed)
    intervals = []
    for _ in range(n_intervals):
        start = int(rng.integers(0, m - min_len + 1))
        end = int(rng.integers(start + min_len, m + 1))
        intervals.append((start, end))
    return IntervalSet(intervals=tuple(intervals), seed=seed)


def _aggregate(window: np.ndarray, agg: str) -> float:
    if agg == "mean":
        return float(np.mean(window))
    if agg == "min":
        return float(np.min(window))
    if agg == "max":
        return float(np.max(window))
    if agg == "sum":
        return float(np.sum(window))
    if agg == "med":
        return float(np.median(window))
    if agg == "std":
        return float(np.std(window))
    if agg == "count":
        # interval length: the only label-free reading of "count"
        return float(len(window))
    if agg == "skew":
        value = sps.skew(window)
        return float(value) if np.isfinite(value) else 0.0
    if agg == "quant_25":
        return float(np.quantile(window, 0.25))
    if agg == "quant_75":
        return float(np.quantile(window, 0.75))
    raise ValueError(f"unknown aggregation {agg!r}")


def interval_summary_transform(dataset: TimeSeriesDataset,
                               interval_set: IntervalSet,
                               aggregations=SUMMARY_AGGREGATIONS) -> FeatureMatrix:
    """Summary statistics per sampled interval; F = n_intervals * |aggregations|."""
    unknown = set(aggregations) - set(SUMMARY_AGGREGATIONS)
    if unknown:
        raise ValueError(f"unknown aggregations: {sorted(unknown)}")
    names = tuple(
        f"intervals[{s}:{e}]_{agg}"
        for (s, e) in interval_set.intervals
        for agg in aggregations
    )
    values = np.empty((dataset.n, len(names)))
    for i, row in enumerate(dataset.series):
        col = 0
        for (s, e) in interval_set.intervals:
            window = row[s:e]
            for agg in aggregations:
                values[i, col] = _aggregate(window, agg)
                col += 1
    return FeatureMatrix(values=values, names=names)


def interval_bank_transform(dataset: TimeSeriesDataset,
                            interval_set: IntervalSet) -> FeatureMatrix:
    """The 22-feature bank per sampled interval; F = n_intervals * 22."""
    names = tuple(
        f"intervals_bank[{s}:{e}]_{fname}"
        for (s, e) in interval_set.intervals
        for fname in FEATURE_NAMES
    )
    values = np.empty((dataset.n, len(names)))
    for i, row in enumerate(dataset.series):
        col = 0
        for (s, e) in interval_set.intervals:
            bank = compute_bank(row[s:e])
            values[i, col:col + len(bank)] = bank
            col += len(bank)
    return FeatureMatrix(values=values, names=names)
