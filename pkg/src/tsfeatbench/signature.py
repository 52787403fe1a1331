"""Truncated path-signature features over hierarchical dyadic windows.

A univariate series is time-augmented into a 2-channel piecewise-linear
path; its depth-N signature is the graded collection of iterated integrals,
computed exactly by folding per-segment signatures with the truncated
tensor product (Chen's relation).  Level-k terms of a single linear segment
with increment D are D^(tensor k) / k!.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import TimeSeriesDataset
from .errors import DimensionMismatch, PathTooShort, SeriesTooShort
from .features import FeatureMatrix


@dataclass(frozen=True)
class TensorSignature:
    """Truncated signature; level k is stored flat with d**k entries.

    The flat index of word (i1, ..., ik) is its base-d digit expansion,
    most significant digit first.
    """

    dim: int
    levels: tuple  # level k at index k-1, each an ndarray of length dim**k

    @property
    def depth(self) -> int:
        return len(self.levels)

    def term_count(self) -> int:
        return sum(self.dim**k for k in range(1, self.depth + 1))

    def flatten(self) -> np.ndarray:
        return np.concatenate(self.levels)


def zero_signature(dim: int, depth: int) -> TensorSignature:
    return TensorSignature(
        dim=dim, levels=tuple(np.zeros(dim**k) for k in range(1, depth + 1))
    )


def segment_signature(increment, depth: int) -> TensorSignature:
    """Signature of one linear segment: level k = increment^(tensor k)/k!."""
    delta = np.asarray(increment, dtype=np.float64)
    if depth < 1:
        raise PathTooShort(f"depth must be >= 1, got {depth}")
    levels = [delta.copy()]
    for k in range(2, depth + 1):
        levels.append(np.kron(levels[-1], delta) / k)
    return TensorSignature(dim=len(delta), levels=tuple(levels))


def chen_concat(sig_a: TensorSignature, sig_b: TensorSignature) -> TensorSignature:
    """Truncated tensor product of two signatures (Chen's relation).

    Level k of the result is sum over i+j=k of a_i (tensor) b_j with the
    implicit level-0 scalar 1 on both sides.
    """
    if sig_a.dim != sig_b.dim or sig_a.depth != sig_b.depth:
        raise DimensionMismatch(
            f"(d={sig_a.dim}, N={sig_a.depth}) vs (d={sig_b.dim}, N={sig_b.depth})"
        )
    levels = []
    for k in range(1, sig_a.depth + 1):
        level = sig_a.levels[k - 1] + sig_b.levels[k - 1]
        for i in range(1, k):
            level = level + np.kron(sig_a.levels[i - 1], sig_b.levels[k - i - 1])
        levels.append(level)
    return TensorSignature(dim=sig_a.dim, levels=tuple(levels))


def signature(points, depth: int) -> TensorSignature:
    """Signature of the piecewise-linear path through ``points`` (P x d)."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise PathTooShort(f"need at least 2 path points, got shape {pts.shape}")
    sig = segment_signature(pts[1] - pts[0], depth)
    for i in range(1, pts.shape[0] - 1):
        sig = chen_concat(sig, segment_signature(pts[i + 1] - pts[i], depth))
    # the first level telescopes to the endpoint increment; computing it
    # directly keeps it exact instead of accumulating rounding per segment
    levels = (pts[-1] - pts[0],) + sig.levels[1:]
    return TensorSignature(dim=sig.dim, levels=levels)


def dyadic_windows(m: int, window_depth: int):
    """Hierarchical dyadic point windows over a length-m series.

    Level l contributes 2**l windows (start, end) over point indices with
    end inclusive; each level's windows partition the m-1 segments, so
    consecutive windows share their boundary point.  Total window count is
    2**(window_depth+1) - 1.
    """
    if m < 2**window_depth + 1:
        raise SeriesTooShort(
            f"need m >= {2**window_depth + 1} for window_depth={window_depth}, got {m}"
        )
    segments = m - 1
    windows = []
    for level in range(window_depth + 1):
        parts = 2**level
        edges = [round(i * segments / parts) for i in range(parts + 1)]
        for i in range(parts):
            windows.append((edges[i], edges[i + 1]))
    return windows


def _word_names(dim: int, depth: int):
    names = []
    for k in range(1, depth + 1):
        for flat in range(dim**k):
            digits = []
            rest = flat
            for _ in range(k):
                digits.append(rest % dim)
                rest //= dim
            word = "".join(str(d + 1) for d in reversed(digits))
            names.append(word)
    return names


def time_augment(series) -> np.ndarray:
    """2-channel path (t, x) with t = i/(m-1) on [0, 1]."""
    x = np.asarray(series, dtype=np.float64)
    m = len(x)
    t = np.arange(m) / (m - 1)
    return np.column_stack([t, x])


def signature_transform(dataset: TimeSeriesDataset, sig_depth: int = 4,
                        window_depth: int = 4) -> FeatureMatrix:
    """Signature features of time-augmented series over dyadic windows.

    With the defaults (depth 4, dyadic depth 4, d=2 after time
    augmentation) F = 31 windows x 30 terms = 930.  The transform is
    deterministic: there is no randomness to seed.
    """
    windows = dyadic_windows(dataset.m, window_depth)
    words = _word_names(2, sig_depth)
    names = tuple(
        f"signature[w{wi}_{s}:{e}]_{word}"
        for wi, (s, e) in enumerate(windows)
        for word in words
    )
    values = np.empty((dataset.n, len(names)))
    for i, row in enumerate(dataset.series):
        path = time_augment(row)
        col = 0
        for (s, e) in windows:
            sig = signature(path[s:e + 1], sig_depth)
            flat = sig.flatten()
            values[i, col:col + len(flat)] = flat
            col += len(flat)
    return FeatureMatrix(values=values, names=names)
