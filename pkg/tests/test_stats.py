import itertools

import numpy as np
import pytest
import scipy.stats as sps

from tsfeatbench.errors import (
    AllZeroDifferences,
    DegenerateTable,
    MissingLengths,
    UnsupportedK,
)
from tsfeatbench.stats import (
    ResultsTable,
    average_ranks,
    cd_diagram,
    friedman_test,
    holm_adjust,
    nemenyi_cd,
    pairwise_matrix,
    pairwise_matrix_svg,
    stratify_by_length,
    wilcoxon_signed_rank,
)


def brute_force_wilcoxon(a, b):
    """Two-sided exact signed-rank p-value by enumerating all 2^n signs.

    Independent oracle: for each sign assignment over the non-zero
    differences, accumulate the positive-rank sum W+, then report the
    probability of a W+ at least as extreme (in min(W+, W-) terms) as the
    observed one under the uniform null.
    """
    diffs = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    diffs = diffs[diffs != 0.0]
    n = diffs.size
    ranks = sps.rankdata(np.abs(diffs), method="average")
    observed = float(np.sum(ranks[diffs > 0]))
    total = float(np.sum(ranks))
    obs_stat = min(observed, total - observed)
    hits = 0
    for signs in itertools.product((0.0, 1.0), repeat=n):
        w_plus = float(np.dot(signs, ranks))
        if min(w_plus, total - w_plus) <= obs_stat + 1e-12:
            hits += 1
    return hits / 2.0**n


def table_of(rows, methods=None, lengths=None):
    rows = np.asarray(rows, dtype=np.float64)
    methods = methods or tuple(f"m{j}" for j in range(rows.shape[1]))
    return ResultsTable(
        datasets=tuple(f"d{i}" for i in range(rows.shape[0])),
        methods=tuple(methods),
        accuracies=rows,
        lengths=lengths,
    )


class TestRanks:
    def test_hand_example(self):
        t = table_of([[0.9, 0.8, 0.7],
                      [0.6, 0.6, 0.5]])
        np.testing.assert_allclose(average_ranks(t), [1.25, 1.75, 3.0])

    def test_rank_one_is_best(self):
        t = table_of([[0.1, 0.9], [0.2, 0.8]])
        np.testing.assert_allclose(average_ranks(t), [2.0, 1.0])

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(0)
        acc = rng.uniform(size=(12, 4))
        np.testing.assert_array_equal(
            average_ranks(table_of(acc)),
            average_ranks(table_of(np.exp(3 * acc))))

    def test_rank_sum_identity(self):
        rng = np.random.default_rng(1)
        t = table_of(rng.uniform(size=(9, 5)))
        N, k = 9, 5
        assert np.isclose(average_ranks(t).sum() * N, N * k * (k + 1) / 2)


class TestFriedman:
    def test_one_method_always_wins_k2(self):
        # k=2, N=10, no ties: tie-corrected statistic is exactly N
        t = table_of(np.column_stack([np.full(10, 0.9),
                                      np.linspace(0.1, 0.5, 10)]))
        stat, p = friedman_test(t)
        assert np.isclose(stat, 10.0)
        assert np.isclose(p, float(sps.chi2.sf(10.0, 1)))

    def test_matches_scipy_without_ties(self):
        rng = np.random.default_rng(5)
        acc = rng.uniform(size=(15, 4))
        stat, p = friedman_test(table_of(acc))
        ref = sps.friedmanchisquare(*[acc[:, j] for j in range(4)])
        assert np.isclose(stat, ref.statistic)
        assert np.isclose(p, ref.pvalue)

    def test_fully_tied_rows_degenerate(self):
        with pytest.raises(DegenerateTable):
            friedman_test(table_of(np.ones((5, 3))))

    def test_single_dataset_rejected(self):
        with pytest.raises(DegenerateTable):
            friedman_test(table_of([[0.1, 0.2, 0.3]]))


class TestNemenyi:
    def test_reference_value(self):
        assert abs(nemenyi_cd(5, 112, 0.05) - 0.576) <= 1e-3

    def test_k2_alpha05_quantile(self):
        assert np.isclose(nemenyi_cd(2, 6, 0.05),
                          1.960 * np.sqrt(2 * 3 / (6 * 6)))

    def test_matches_studentized_range(self):
        # q_alpha(k) = studentized-range quantile (infinite df) / sqrt(2)
        for k in (2, 5, 10, 20):
            for alpha in (0.05, 0.10):
                q = sps.studentized_range.ppf(1 - alpha, k, np.inf) / np.sqrt(2)
                got = nemenyi_cd(k, 30, alpha) / np.sqrt(k * (k + 1) / (6 * 30))
                assert abs(got - q) <= 2e-3, (k, alpha)

    def test_quadrupling_n_halves_cd(self):
        assert np.isclose(nemenyi_cd(6, 40), nemenyi_cd(6, 10) / 2)

    def test_unsupported(self):
        with pytest.raises(UnsupportedK):
            nemenyi_cd(21, 10)
        with pytest.raises(UnsupportedK):
            nemenyi_cd(5, 10, alpha=0.01)


class TestWilcoxon:
    def test_all_positive_n5(self):
        p = wilcoxon_signed_rank([1, 2, 3, 4, 5], [0, 0, 0, 0, 0])
        assert np.isclose(p, 0.0625)

    def test_matches_brute_force_small_n(self):
        rng = np.random.default_rng(2)
        for trial in range(30):
            n = int(rng.integers(3, 11))
            a = rng.normal(size=n)
            b = a - rng.normal(scale=0.5, size=n)
            if rng.random() < 0.3:          # inject ties in |diff|
                b[0] = a[0] - abs(a[-1] - b[-1])
            assert abs(wilcoxon_signed_rank(a, b)
                       - brute_force_wilcoxon(a, b)) <= 1e-12, trial

    def test_zero_differences_dropped(self):
        a = [1.0, 2.0, 3.0, 4.0, 5.0, 9.0]
        b = [0.0, 0.0, 0.0, 0.0, 0.0, 9.0]
        assert np.isclose(wilcoxon_signed_rank(a, b), 0.0625)

    def test_all_zero_raises(self):
        with pytest.raises(AllZeroDifferences):
            wilcoxon_signed_rank([1.0, 2.0], [1.0, 2.0])

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        a, b = rng.normal(size=12), rng.normal(size=12)
        assert wilcoxon_signed_rank(a, b) == wilcoxon_signed_rank(b, a)

    def test_large_n_matches_scipy_approx(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=60)
        b = a - rng.normal(loc=0.2, size=60)
        ref = sps.wilcoxon(a, b, correction=True,
                           method="approx").pvalue
        assert np.isclose(wilcoxon_signed_rank(a, b), ref, rtol=1e-10)


class TestHolm:
    def test_hand_example(self):
        np.testing.assert_allclose(holm_adjust([0.01, 0.04, 0.03]),
                                   [0.03, 0.06, 0.06])

    def test_matches_step_down_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            p = rng.uniform(size=int(rng.integers(1, 12)))
            m = len(p)
            order = np.argsort(p)
            expected = np.empty(m)
            peak = 0.0
            for i, idx in enumerate(order):
                peak = max(peak, min(1.0, (m - i) * p[idx]))
                expected[idx] = peak
            np.testing.assert_allclose(holm_adjust(p), expected)

    def test_clamped_and_monotone(self):
        adj = holm_adjust([0.5, 0.6, 0.9])
        assert np.all(adj <= 1.0)
        assert adj[0] <= adj[1] <= adj[2]


class TestPairwise:
    def test_identical_columns_not_different(self):
        rng = np.random.default_rng(7)
        col = rng.uniform(size=15)
        t = table_of(np.column_stack([col, col, col + 0.3]))
        mat = pairwise_matrix(t, alpha=0.05)
        assert mat.no_difference[0, 1]
        assert mat.adjusted_p[0, 1] == 1.0
        assert not mat.no_difference[0, 2]
        assert not mat.no_difference[1, 2]

    def test_symmetric_with_true_diagonal(self):
        rng = np.random.default_rng(8)
        mat = pairwise_matrix(table_of(rng.uniform(size=(10, 4))))
        np.testing.assert_array_equal(mat.no_difference, mat.no_difference.T)
        assert np.all(np.diag(mat.no_difference))
        np.testing.assert_array_equal(mat.adjusted_p, mat.adjusted_p.T)
        assert np.all(np.diag(mat.adjusted_p) == 1.0)


class TestStratify:
    def test_strict_thresholds(self):
        t = table_of(np.tile([[0.5, 0.6]], (5, 1)),
                     lengths=(100, 315, 500, 720, 900))
        short, long_, very_long = stratify_by_length(t)
        assert short.datasets == ("d0",)            # 315 excluded from both
        assert long_.datasets == ("d2", "d3", "d4")  # 720 > 315 but not > 720
        assert very_long.datasets == ("d4",)

    def test_missing_lengths(self):
        with pytest.raises(MissingLengths):
            stratify_by_length(table_of([[0.1, 0.2], [0.3, 0.4]]))


class TestResultsTableIO:
    def test_tsv_round_trip(self):
        rng = np.random.default_rng(9)
        t = table_of(rng.uniform(size=(4, 3)), lengths=(10, 20, 30, 40))
        back = ResultsTable.from_tsv(t.to_tsv())
        assert back.datasets == t.datasets
        assert back.methods == t.methods
        assert back.lengths == t.lengths
        np.testing.assert_array_equal(back.accuracies, t.accuracies)

    def test_round_trip_without_lengths(self):
        t = table_of([[0.125, 0.25], [0.5, 1.0]])
        back = ResultsTable.from_tsv(t.to_tsv())
        assert back.lengths is None
        np.testing.assert_array_equal(back.accuracies, t.accuracies)

    def test_shape_mismatch(self):
        with pytest.raises(DegenerateTable):
            ResultsTable(datasets=("d0",), methods=("a", "b"),
                         accuracies=np.zeros((2, 2)))

    def test_nan_rejected(self):
        with pytest.raises(DegenerateTable):
            table_of([[0.1, np.nan]])


class TestCDDiagram:
    def test_model_fields(self):
        rng = np.random.default_rng(10)
        acc = rng.uniform(size=(20, 4))
        acc[:, 0] += 1.0                # method 0 clearly best
        t = table_of(acc, methods=("best", "b", "c", "d"))
        model, svg = cd_diagram(t, alpha=0.05)
        assert model.methods[0] == "best"
        assert model.ranks == tuple(sorted(model.ranks))
        assert np.isclose(model.cd, nemenyi_cd(4, 20, 0.05))
        assert svg.startswith("<svg") or svg.startswith("<?xml")
        assert 'version="1.1"' in svg
        for name in model.methods:
            assert name in svg

    def test_cliques_match_cd(self):
        model, _ = cd_diagram(
            table_of(np.random.default_rng(11).uniform(size=(8, 5))))
        for (i, j) in model.cliques:
            assert model.ranks[j] - model.ranks[i] < model.cd
            if j + 1 < len(model.ranks):
                assert model.ranks[j + 1] - model.ranks[i] >= model.cd

    def test_svg_deterministic(self):
        t = table_of(np.random.default_rng(12).uniform(size=(10, 3)))
        assert cd_diagram(t)[1] == cd_diagram(t)[1]

    def test_pairwise_svg(self):
        t = table_of(np.random.default_rng(13).uniform(size=(10, 3)))
        svg = pairwise_matrix_svg(pairwise_matrix(t))
        assert 'version="1.1"' in svg
        assert svg == pairwise_matrix_svg(pairwise_matrix(t))
