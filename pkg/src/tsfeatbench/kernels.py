"""ROCKET-family convolutional feature transforms.

Three transforms share the same dilated-convolution core:

* ``rocket_transform`` — random kernels, ppv + max pooling.
* ``minirocket_transform`` — the fixed bank of 84 two-valued length-9
  patterns, ppv only, biases fitted as quantiles of training convolutions.
* ``multirocket_transform`` — the fixed bank applied to the base series and
  its first-order difference, with up to six pooling operators.

Bank construction is a single fit step on the train split; transforms are
pure given the fitted bank.  "Positive" always means strictly ``> 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .dataset import TimeSeriesDataset
from .errors import BudgetTooSmall, EmptyActivations, KernelTooLarge, TooShort
from .features import FeatureMatrix

KERNEL_LENGTHS = (7, 9, 11)
POOLING_ORDER = ("ppv", "mpv", "mipv", "lspv", "max", "mean")

N_FIXED_PATTERNS = 84  # C(9, 3)


def dilated_convolve(series, weights, dilation: int = 1, bias: float = 0.0,
                     padding: bool = False) -> np.ndarray:
    """Convolve one series with a dilated kernel and subtract the bias.

    Output length is ``m`` with zero padding, ``m - (l-1)*dilation``
    without.  Raises :class:`KernelTooLarge` when no output position exists.
    """
    x = np.asarray(series, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    m = len(x)
    l = len(w)
    span = (l - 1) * dilation
    if padding:
        pad = span // 2
        x = np.concatenate([np.zeros(pad), x, np.zeros(span - pad)])
        out_len = m
    else:
        out_len = m - span
    if out_len < 1:
        raise KernelTooLarge(
            f"kernel span {span} too large for series of length {m}"
        )
    out = np.zeros(out_len)
    for j in range(l):
        out += w[j] * x[j * dilation: j * dilation + out_len]
    return out - bias


def pool(activations, operator: str) -> float:
    """Reduce an activation vector to one pooled statistic."""
    a = np.asarray(activations, dtype=np.float64)
    if a.size == 0:
        raise EmptyActivations("cannot pool an empty activation vector")
    positive = a > 0.0
    if operator == "ppv":
        return float(np.mean(positive))
    if operator == "max":
        return float(np.max(a))
    if operator == "mean":
        return float(np.mean(a))
    if operator == "mpv":
        return float(np.mean(a[positive])) if positive.any() else 0.0
    if operator == "mipv":
        if not positive.any() or a.size == 1:
            return 0.0
        return float(np.mean(np.flatnonzero(positive)) / (a.size - 1))
    if operator == "lspv":
        best = run = 0
        for flag in positive:
            run = run + 1 if flag else 0
            best = max(best, run)
        return float(best)
    raise ValueError(f"unknown pooling operator {operator!r}")


def first_difference(series) -> np.ndarray:
    """Consecutive-value differences; length m-1."""
    x = np.asarray(series, dtype=np.float64)
    if len(x) < 2:
        raise TooShort(f"need length >= 2 for first difference, got {len(x)}")
    return np.diff(x)


# --- random-kernel ROCKET ----------------------------------------------------

@dataclass(frozen=True)
class RandomKernel:
    weights: np.ndarray
    bias: float
    dilation: int
    padding: bool


def _generate_random_kernels(m: int, n_kernels: int, rng: np.random.Generator):
    kernels = []
    for _ in range(n_kernels):
        l = int(rng.choice(KERNEL_LENGTHS))
        weights = rng.standard_normal(l)
        weights -= weights.mean()
        bias = float(rng.uniform(-1.0, 1.0))
        max_exp = np.log2((m - 1) / (l - 1))
        u = rng.uniform(0.0, max_exp)
        dilation = int(2 ** np.floor(u))
        padding = bool(rng.integers(0, 2))
        kernels.append(RandomKernel(weights, bias, dilation, padding))
    return kernels


def rocket_transform(train: TimeSeriesDataset, apply_to: TimeSeriesDataset,
                     n_kernels: int = 500, seed: int = 0) -> FeatureMatrix:
    """ppv + max features from random dilated kernels; F = 2 * n_kernels.

    Kernel generation depends on the train split only (series length m and
    the seed); the transform never looks at test values during fit.
    """
    if n_kernels < 1:
        raise BudgetTooSmall(f"n_kernels must be >= 1, got {n_kernels}")
    rng = np.random.default_rng(seed)
    kernels = _generate_random_kernels(train.m, n_kernels, rng)
    values = np.empty((apply_to.n, 2 * n_kernels))
    names = []
    for k, kern in enumerate(kernels):
        names.append(f"rocket[k{k}]_ppv")
        names.append(f"rocket[k{k}]_max")
    for i, row in enumerate(apply_to.series):
        for k, kern in enumerate(kernels):
            act = dilated_convolve(row, kern.weights, kern.dilation,
                                   kern.bias, kern.padding)
            values[i, 2 * k] = pool(act, "ppv")
            values[i, 2 * k + 1] = pool(act, "max")
    return FeatureMatrix(values=values, names=tuple(names))


# --- fixed MiniROCKET bank ---------------------------------------------------

def fixed_patterns() -> np.ndarray:
    """The 84 length-9 weight patterns: value 2 at 3 positions, -1 elsewhere.

    Every pattern sums to 3*2 + 6*(-1) = 0.
    """
    patterns = np.full((N_FIXED_PATTERNS, 9), -1.0)
    for p, combo in enumerate(itertools.combinations(range(9), 3)):
        patterns[p, list(combo)] = 2.0
    return patterns


@dataclass(frozen=True)
class FixedKernelBank:
    """Fitted (pattern, dilation, bias) triples; ``features_per_pattern``
    triples for each of the 84 patterns."""

    patterns: np.ndarray
    dilations: np.ndarray    # (features_per_pattern,) shared across patterns
    biases: np.ndarray       # (84, features_per_pattern)

    @property
    def features_per_pattern(self) -> int:
        return len(self.dilations)

    @property
    def size(self) -> int:
        return N_FIXED_PATTERNS * self.features_per_pattern


def _bank_dilations(m: int, features_per_pattern: int) -> np.ndarray:
    # log-uniform grid over the feasible range for padded length-9 kernels
    max_dilation = max((m - 1) // 8, 1)
    if features_per_pattern == 1:
        exponents = np.array([0.0])
    else:
        exponents = np.linspace(0.0, np.log2(max_dilation), features_per_pattern)
    return np.floor(2.0**exponents).astype(int)


def fit_fixed_bank(train_series: np.ndarray, features_per_pattern: int,
                   seed: int = 0) -> FixedKernelBank:
    """Fit biases as quantiles of convolution outputs on sampled train series.

    Deterministic given (train data, seed): ceil(sqrt(n)) series are sampled
    with a seeded generator, and the bias of triple j at each pattern is the
    (j+1)/(features_per_pattern+1) quantile of that pattern's convolution
    values at the triple's dilation.
    """
    n, m = train_series.shape
    patterns = fixed_patterns()
    dilations = _bank_dilations(m, features_per_pattern)
    rng = np.random.default_rng(seed)
    n_sample = int(np.ceil(np.sqrt(n)))
    sample_idx = np.sort(rng.choice(n, size=n_sample, replace=False))
    sampled = train_series[sample_idx]

    quantile_levels = (np.arange(features_per_pattern) + 1.0) / (features_per_pattern + 1.0)
    biases = np.empty((N_FIXED_PATTERNS, features_per_pattern))
    for p in range(N_FIXED_PATTERNS):
        for j, dilation in enumerate(dilations):
            acts = np.concatenate([
                dilated_convolve(row, patterns[p], int(dilation), 0.0, True)
                for row in sampled
            ])
            biases[p, j] = np.quantile(acts, quantile_levels[j])
    return FixedKernelBank(patterns=patterns, dilations=dilations, biases=biases)


def _apply_fixed_bank(series_matrix: np.ndarray, bank: FixedKernelBank,
                      operators) -> np.ndarray:
    n = series_matrix.shape[0]
    n_ops = len(operators)
    values = np.empty((n, bank.size * n_ops))
    for i, row in enumerate(series_matrix):
        col = 0
        for p in range(N_FIXED_PATTERNS):
            for j, dilation in enumerate(bank.dilations):
                act = dilated_convolve(row, bank.patterns[p], int(dilation),
                                       bank.biases[p, j], True)
                for op in operators:
                    values[i, col] = pool(act, op)
                    col += 1
    return values


def _fixed_bank_names(bank: FixedKernelBank, prefix: str, operators):
    names = []
    for p in range(N_FIXED_PATTERNS):
        for j, dilation in enumerate(bank.dilations):
            for op in operators:
                names.append(f"{prefix}[p{p}_d{dilation}_q{j}]_{op}")
    return names


def minirocket_transform(train: TimeSeriesDataset, apply_to: TimeSeriesDataset,
                         feature_budget: int = 1000, seed: int = 0) -> FeatureMatrix:
    """ppv features from the fixed 84-pattern bank.

    F = 84 * floor(feature_budget / 84); the default budget of 1000 yields
    924 features.  Bit-identical output for identical (train, seed).
    """
    if feature_budget < N_FIXED_PATTERNS:
        raise BudgetTooSmall(
            f"feature_budget must be >= {N_FIXED_PATTERNS}, got {feature_budget}"
        )
    features_per_pattern = feature_budget // N_FIXED_PATTERNS
    bank = fit_fixed_bank(train.series, features_per_pattern, seed)
    values = _apply_fixed_bank(apply_to.series, bank, ("ppv",))
    names = _fixed_bank_names(bank, "minirocket", ("ppv",))
    return FeatureMatrix(values=values, names=tuple(names))


def multirocket_transform(train: TimeSeriesDataset, apply_to: TimeSeriesDataset,
                          n_kernel_instances: int = 125,
                          features_per_kernel: int = 6,
                          seed: int = 0) -> FeatureMatrix:
    """Fixed-bank pooling over the base series and its first difference.

    F = 84 * instances_per_pattern * 2 representations * features_per_kernel;
    the default (125 kernel instances, 6 features per kernel) yields 1008.
    """
    if features_per_kernel not in (4, 6):
        raise BudgetTooSmall(
            f"features_per_kernel must be 4 or 6, got {features_per_kernel}"
        )
    instances_per_pattern = max(n_kernel_instances // N_FIXED_PATTERNS, 1)
    if n_kernel_instances < 1:
        raise BudgetTooSmall(f"n_kernel_instances must be >= 1, got {n_kernel_instances}")
    operators = POOLING_ORDER[:features_per_kernel]

    diff_train = np.diff(train.series, axis=1)
    diff_apply = np.diff(apply_to.series, axis=1)

    blocks = []
    names = []
    for rep, (fit_on, apply_on) in (
        ("base", (train.series, apply_to.series)),
        ("diff", (diff_train, diff_apply)),
    ):
        bank = fit_fixed_bank(fit_on, instances_per_pattern, seed)
        blocks.append(_apply_fixed_bank(apply_on, bank, operators))
        names.extend(_fixed_bank_names(bank, f"multirocket_{rep}", operators))
    return FeatureMatrix(values=np.hstack(blocks), names=tuple(names))
