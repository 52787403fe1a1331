"""A fixed 22-feature canonical statistics bank.

The bank plays the role of compact pre-defined feature sets in the
benchmark: 22 named, order-stable summary statistics computable on any
window of length >= 3.  All outputs are finite for finite input; ratios
that are undefined on zero-variance windows return the sentinel 0.
"""

from __future__ import annotations

import numpy as np

from .errors import WindowTooShort

FEATURE_NAMES = (
    "mean",
    "std",
    "skewness",
    "excess_kurtosis",
    "min",
    "max",
    "median",
    "iqr",
    "quantile_25",
    "quantile_75",
    "trend_slope",
    "trend_r2",
    "acf_lag1",
    "acf_lag2",
    "acf_first_below_1e",
    "mean_crossing_rate",
    "longest_above_mean_ratio",
    "mean_abs_diff",
    "outlier_2std_ratio",
    "spectral_centroid",
    "spectral_entropy",
    "diff_variance_ratio",
)

N_FEATURES = len(FEATURE_NAMES)


def _acf(x_centered: np.ndarray, ss: float, lag: int) -> float:
    # biased (1/n) normalization keeps |rho| <= 1
    if ss == 0.0 or lag >= len(x_centered):
        return 0.0
    return float(np.dot(x_centered[:-lag], x_centered[lag:]) / ss)


def _longest_run(mask: np.ndarray) -> int:
    best = run = 0
    for flag in mask:
        run = run + 1 if flag else 0
        if run > best:
            best = run
    return best


def compute_bank(window) -> np.ndarray:
    """Compute the 22 bank features, in :data:`FEATURE_NAMES` order."""
    x = np.asarray(window, dtype=np.float64)
    if x.ndim != 1 or len(x) < 3:
        raise WindowTooShort(f"need a 1-d window of length >= 3, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise WindowTooShort("window contains non-finite values")

    n = len(x)
    mean = float(np.mean(x))
    std = float(np.std(x))
    centered = x - mean
    ss = float(np.dot(centered, centered))
    var = ss / n

    if std > 0.0:
        z = centered / std
        skew = float(np.mean(z**3))
        kurt = float(np.mean(z**4) - 3.0)
    else:
        skew = 0.0
        kurt = 0.0

    q25, med, q75 = (float(q) for q in np.quantile(x, [0.25, 0.5, 0.75]))

    # OLS trend against the index
    idx = np.arange(n, dtype=np.float64)
    idx_c = idx - idx.mean()
    sxx = float(np.dot(idx_c, idx_c))
    slope = float(np.dot(idx_c, centered) / sxx)
    if ss > 0.0:
        r2 = float(slope * slope * sxx / ss)
    else:
        r2 = 0.0

    acf1 = _acf(centered, ss, 1)
    acf2 = _acf(centered, ss, 2)
    first_below = 1.0
    if ss > 0.0:
        for lag in range(1, n):
            if _acf(centered, ss, lag) < 1.0 / np.e:
                first_below = lag / n
                break

    signs = np.sign(centered)
    crossings = int(np.sum(signs[:-1] * signs[1:] < 0))
    crossing_rate = crossings / (n - 1)

    longest_above = _longest_run(centered > 0.0) / n

    diffs = np.diff(x)
    mean_abs_diff = float(np.mean(np.abs(diffs)))
    outlier_ratio = float(np.mean(np.abs(centered) > 2.0 * std)) if std > 0.0 else 0.0

    # periodogram over positive frequencies of the demeaned window
    spectrum = np.abs(np.fft.rfft(centered)[1:]) ** 2
    total = float(np.sum(spectrum))
    if total > 0.0:
        freqs = np.fft.rfftfreq(n)[1:]
        centroid = float(np.dot(freqs, spectrum) / total)
        probs = spectrum / total
        nz = probs[probs > 0.0]
        if len(nz) > 1:
            entropy = float(-np.sum(nz * np.log(nz)) / np.log(len(probs)))
        else:
            entropy = 0.0
    else:
        centroid = 0.0
        entropy = 0.0

    var_ratio = float(np.var(diffs) / var) if var > 0.0 else 0.0

    return np.array([
        mean, std, skew, kurt,
        float(np.min(x)), float(np.max(x)), med, q75 - q25, q25, q75,
        slope, r2, acf1, acf2, first_below,
        crossing_rate, longest_above, mean_abs_diff, outlier_ratio,
        centroid, entropy, var_ratio,
    ])
