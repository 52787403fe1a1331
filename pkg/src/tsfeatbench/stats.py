"""Rank-based comparison of methods over datasets.

Friedman test with tie correction, Nemenyi critical difference, exact and
approximate two-sided Wilcoxon signed-rank, Holm step-down adjustment,
pairwise significance matrices, critical-difference diagram rendering
(SVG 1.1) and series-length stratification.

Rank direction: rank 1 is the best (highest) accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .errors import (
    AllZeroDifferences,
    DegenerateTable,
    MissingLengths,
    UnsupportedK,
)

# Critical values q_alpha for the Nemenyi test (studentized range at
# infinite df divided by sqrt(2)), k = 2..20.  Sourced from standard
# published tables; recomputed against scipy's studentized-range
# distribution in the test suite.
_Q_ALPHA = {
    0.05: [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,
           3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517,
           3.544],
    0.10: [1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920,
           2.978, 3.030, 3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291,
           3.319],
}

EXACT_WILCOXON_LIMIT = 25


@dataclass(frozen=True)
class ResultsTable:
    """Accuracies indexed by (dataset, method), optional per-dataset length."""

    datasets: tuple
    methods: tuple
    accuracies: np.ndarray          # N x k
    lengths: tuple = None           # per-dataset series length m, optional

    def __post_init__(self):
        acc = np.asarray(self.accuracies, dtype=np.float64)
        if acc.ndim != 2:
            raise DegenerateTable("accuracies must be a 2-d matrix")
        if acc.shape != (len(self.datasets), len(self.methods)):
            raise DegenerateTable(
                f"shape {acc.shape} does not match {len(self.datasets)} datasets"
                f" x {len(self.methods)} methods"
            )
        if len(self.methods) < 2:
            raise DegenerateTable("need at least 2 methods")
        if not np.all(np.isfinite(acc)):
            raise DegenerateTable("missing or non-finite cells")
        acc.setflags(write=False)
        object.__setattr__(self, "accuracies", acc)
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.lengths is not None:
            object.__setattr__(self, "lengths", tuple(int(l) for l in self.lengths))

    @property
    def n_datasets(self) -> int:
        return len(self.datasets)

    @property
    def n_methods(self) -> int:
        return len(self.methods)

    def to_tsv(self) -> str:
        header = ["dataset", *self.methods]
        if self.lengths is not None:
            header.append("__length__")
        lines = ["\t".join(header)]
        for i, name in enumerate(self.datasets):
            row = [name, *(repr(float(v)) for v in self.accuracies[i])]
            if self.lengths is not None:
                row.append(str(self.lengths[i]))
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "ResultsTable":
        lines = [l for l in text.splitlines() if l.strip()]
        if not lines:
            raise DegenerateTable("empty results table")
        header = lines[0].split("\t")
        has_lengths = header and header[-1] == "__length__"
        methods = tuple(header[1:-1] if has_lengths else header[1:])
        datasets, rows, lengths = [], [], []
        for line in lines[1:]:
            parts = line.split("\t")
            datasets.append(parts[0])
            if has_lengths:
                rows.append([float(v) for v in parts[1:-1]])
                lengths.append(int(parts[-1]))
            else:
                rows.append([float(v) for v in parts[1:]])
        return cls(datasets=tuple(datasets), methods=methods,
                   accuracies=np.array(rows),
                   lengths=tuple(lengths) if has_lengths else None)


@dataclass(frozen=True)
class SignificanceMatrix:
    """k x k symmetry: True = no significant difference at the given alpha."""

    methods: tuple
    no_difference: np.ndarray       # bool, symmetric, diagonal True
    adjusted_p: np.ndarray          # adjusted p-values, diagonal 1
    alpha: float


def _row_ranks(accuracies: np.ndarray) -> np.ndarray:
    # rank 1 = highest accuracy; ties get the mean of the tied ranks
    return np.vstack([sps.rankdata(-row, method="average") for row in accuracies])


def average_ranks(table: ResultsTable) -> np.ndarray:
    return _row_ranks(table.accuracies).mean(axis=0)


def friedman_test(table: ResultsTable):
    """Tie-corrected Friedman chi-square and its p-value (k-1 df)."""
    N, k = table.accuracies.shape
    if N < 2:
        raise DegenerateTable("Friedman test needs at least 2 datasets")
    ranks = _row_ranks(table.accuracies)
    rank_sums = ranks.sum(axis=0)
    numerator = (k - 1) * float(np.sum((rank_sums - N * (k + 1) / 2.0) ** 2))
    denominator = float(np.sum(ranks**2)) - N * k * (k + 1) ** 2 / 4.0
    if denominator == 0.0:
        raise DegenerateTable("all rows fully tied")
    statistic = numerator / denominator
    p_value = float(sps.chi2.sf(statistic, k - 1))
    return statistic, p_value


def nemenyi_cd(k: int, N: int, alpha: float = 0.05) -> float:
    """Critical difference q_alpha(k) * sqrt(k(k+1)/(6N))."""
    if not 2 <= k <= 20:
        raise UnsupportedK(f"k must be in 2..20, got {k}")
    if alpha not in _Q_ALPHA:
        raise UnsupportedK(f"alpha must be 0.05 or 0.10, got {alpha}")
    q = _Q_ALPHA[alpha][k - 2]
    return q * np.sqrt(k * (k + 1) / (6.0 * N))


def _signed_rank_statistic(diffs: np.ndarray):
    abs_ranks = sps.rankdata(np.abs(diffs), method="average")
    w_plus = float(abs_ranks[diffs > 0].sum())
    return w_plus, abs_ranks


def _exact_two_sided_p(w_plus: float, abs_ranks: np.ndarray) -> float:
    # doubled ranks are integers even under mean-tie ranking, so the exact
    # null distribution of 2*W+ is a polynomial product over {0, 2r_i}
    doubled = np.rint(2.0 * abs_ranks).astype(int)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=object)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    w2 = 2.0 * w_plus
    values = np.arange(total + 1)
    denom = 2 ** len(doubled)
    lower = int(sum(c for v, c in zip(values, counts) if v <= w2 + 1e-9))
    upper = int(sum(c for v, c in zip(values, counts) if v >= w2 - 1e-9))
    return min(1.0, 2.0 * min(lower, upper) / denom)


def _approx_two_sided_p(w_plus: float, abs_ranks: np.ndarray) -> float:
    n = len(abs_ranks)
    mu = n * (n + 1) / 4.0
    sigma2 = n * (n + 1) * (2 * n + 1) / 24.0
    # tie correction over groups of equal absolute differences
    _, tie_counts = np.unique(abs_ranks, return_counts=True)
    sigma2 -= float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    if sigma2 <= 0.0:
        return 1.0
    shift = w_plus - mu
    z = (shift - 0.5 * np.sign(shift)) / np.sqrt(sigma2)
    return min(1.0, 2.0 * float(sps.norm.sf(abs(z))))


def wilcoxon_signed_rank(a, b) -> float:
    """Two-sided signed-rank p-value for paired vectors.

    Exact sign-assignment enumeration for n <= 25 non-zero differences;
    normal approximation with tie and continuity corrections beyond.
    """
    diffs = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    diffs = diffs[diffs != 0.0]
    if diffs.size == 0:
        raise AllZeroDifferences("all paired differences are zero")
    w_plus, abs_ranks = _signed_rank_statistic(diffs)
    if diffs.size <= EXACT_WILCOXON_LIMIT:
        return _exact_two_sided_p(w_plus, abs_ranks)
    return _approx_two_sided_p(w_plus, abs_ranks)


def holm_adjust(p_values) -> np.ndarray:
    """Step-down Holm adjustment, clamped at 1, monotone nondecreasing."""
    p = np.asarray(p_values, dtype=np.float64)
    m = len(p)
    order = np.argsort(p, kind="stable")
    adjusted = np.empty(m)
    running_max = 0.0
    for i, idx in enumerate(order):
        value = min(1.0, (m - i) * p[idx])
        running_max = max(running_max, value)
        adjusted[idx] = running_max
    return adjusted


def pairwise_matrix(table: ResultsTable, alpha: float = 0.05) -> SignificanceMatrix:
    """Holm-adjusted pairwise Wilcoxon comparisons for all method pairs.

    Identical columns (all-zero differences) carry no evidence of a
    difference and enter the adjustment with p = 1.
    """
    k = table.n_methods
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    raw = []
    for i, j in pairs:
        try:
            raw.append(wilcoxon_signed_rank(table.accuracies[:, i],
                                            table.accuracies[:, j]))
        except AllZeroDifferences:
            raw.append(1.0)
    adjusted = holm_adjust(raw)
    no_diff = np.eye(k, dtype=bool)
    adj_matrix = np.ones((k, k))
    for (i, j), p in zip(pairs, adjusted):
        no_diff[i, j] = no_diff[j, i] = p >= alpha
        adj_matrix[i, j] = adj_matrix[j, i] = p
    return SignificanceMatrix(methods=table.methods, no_difference=no_diff,
                              adjusted_p=adj_matrix, alpha=alpha)


def stratify_by_length(table: ResultsTable, thresholds=(315, 720)):
    """Sub-tables for m < t0, m > t0 and m > t1 (strict inequalities)."""
    if table.lengths is None:
        raise MissingLengths("table carries no per-dataset series lengths")
    lengths = np.array(table.lengths)
    t0, t1 = thresholds
    out = []
    for mask in (lengths < t0, lengths > t0, lengths > t1):
        idx = np.flatnonzero(mask)
        out.append(ResultsTable(
            datasets=tuple(table.datasets[i] for i in idx),
            methods=table.methods,
            accuracies=table.accuracies[idx],
            lengths=tuple(lengths[idx]),
        ))
    return out


# --- diagram rendering -------------------------------------------------------

@dataclass(frozen=True)
class CDDiagram:
    """Renderable model of a critical-difference diagram."""

    methods: tuple                  # sorted by average rank, best first
    ranks: tuple
    mean_accuracies: tuple
    cd: float
    alpha: float
    cliques: tuple                  # maximal index ranges (into methods)


def _maximal_cliques(sorted_ranks, cd):
    cliques = []
    k = len(sorted_ranks)
    for i in range(k):
        j = i
        while j + 1 < k and sorted_ranks[j + 1] - sorted_ranks[i] < cd:
            j += 1
        if j > i:
            cliques.append((i, j))
    # drop ranges contained in another
    return tuple(
        (i, j) for (i, j) in cliques
        if not any((a <= i and j <= b and (a, b) != (i, j)) for (a, b) in cliques)
    )


def cd_diagram(table: ResultsTable, alpha: float = 0.05) -> tuple:
    """Build the diagram model and its deterministic SVG 1.1 text.

    Methods sit on a number line of average ranks; labels carry the mean
    accuracy to 3 decimals; thick bars join groups whose rank spread is
    below the Nemenyi critical difference.
    """
    k = table.n_methods
    ranks = average_ranks(table)
    means = table.accuracies.mean(axis=0)
    cd = nemenyi_cd(k, table.n_datasets, alpha)
    order = np.argsort(ranks, kind="stable")
    model = CDDiagram(
        methods=tuple(table.methods[i] for i in order),
        ranks=tuple(float(ranks[i]) for i in order),
        mean_accuracies=tuple(float(means[i]) for i in order),
        cd=float(cd),
        alpha=alpha,
        cliques=_maximal_cliques([float(ranks[i]) for i in order], cd),
    )
    return model, _render_cd_svg(model, k)


def _render_cd_svg(model: CDDiagram, k: int) -> str:
    width, margin = 640.0, 60.0
    axis_y = 50.0
    scale = (width - 2 * margin) / max(k - 1, 1)

    def x_of(rank):
        return margin + (rank - 1.0) * scale

    k_methods = len(model.methods)
    half = (k_methods + 1) // 2
    label_rows = max(half, 1)
    clique_base = axis_y + 14.0
    clique_step = 12.0
    label_base = clique_base + clique_step * max(len(model.cliques), 1) + 10.0
    height = label_base + 22.0 * label_rows + 20.0

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.0f}" height="{height:.0f}">',
        f'<line x1="{margin:.1f}" y1="{axis_y:.1f}" x2="{width - margin:.1f}" '
        f'y2="{axis_y:.1f}" stroke="black" stroke-width="1"/>',
    ]
    for tick in range(1, k + 1):
        x = x_of(tick)
        parts.append(
            f'<line x1="{x:.1f}" y1="{axis_y - 5:.1f}" x2="{x:.1f}" '
            f'y2="{axis_y:.1f}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{axis_y - 10:.1f}" font-size="11" '
            f'text-anchor="middle">{tick}</text>'
        )
    # CD ruler
    parts.append(
        f'<line x1="{margin:.1f}" y1="20.0" x2="{margin + model.cd * scale:.1f}" '
        f'y2="20.0" stroke="black" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{margin:.1f}" y="14.0" font-size="11">CD = {model.cd:.3f} '
        f'(alpha = {model.alpha:g})</text>'
    )
    for c, (i, j) in enumerate(model.cliques):
        y = clique_base + c * clique_step
        parts.append(
            f'<line x1="{x_of(model.ranks[i]) - 3:.1f}" y1="{y:.1f}" '
            f'x2="{x_of(model.ranks[j]) + 3:.1f}" y2="{y:.1f}" '
            f'stroke="black" stroke-width="4"/>'
        )
    for idx, (name, rank, mean) in enumerate(
        zip(model.methods, model.ranks, model.mean_accuracies)
    ):
        on_left = idx < half
        row = idx if on_left else idx - half
        y = label_base + 22.0 * row
        x_text = margin - 10.0 if on_left else width - margin + 10.0
        anchor = "end" if on_left else "start"
        x_rank = x_of(rank)
        parts.append(
            f'<path d="M {x_rank:.1f} {axis_y:.1f} V {y - 4:.1f} H {x_text:.1f}" '
            f'fill="none" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x_text:.1f}" y="{y:.1f}" font-size="12" '
            f'text-anchor="{anchor}">{name} ({mean:.3f})</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def pairwise_matrix_svg(matrix: SignificanceMatrix) -> str:
    """Grid rendering; black squares mark pairs with no significant difference."""
    k = len(matrix.methods)
    cell, label_space = 22.0, 140.0
    size = label_space + k * cell + 20.0
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size:.0f}" height="{size:.0f}">',
    ]
    for i, name in enumerate(matrix.methods):
        y = label_space + i * cell + cell * 0.7
        parts.append(
            f'<text x="{label_space - 6:.1f}" y="{y:.1f}" font-size="11" '
            f'text-anchor="end">{name}</text>'
        )
        x = label_space + i * cell + cell * 0.5
        parts.append(
            f'<text x="{x:.1f}" y="{label_space - 6:.1f}" font-size="11" '
            f'text-anchor="start" transform="rotate(-60 {x:.1f} {label_space - 6:.1f})">'
            f'{name}</text>'
        )
    for i in range(k):
        for j in range(k):
            x = label_space + j * cell
            y = label_space + i * cell
            fill = "black" if matrix.no_difference[i, j] else "white"
            parts.append(
                f'<rect x="{x + 2:.1f}" y="{y + 2:.1f}" width="{cell - 4:.1f}" '
                f'height="{cell - 4:.1f}" fill="{fill}" stroke="black" '
                f'stroke-width="0.5"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
