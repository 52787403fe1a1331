import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsfeatbench.errors import BudgetTooSmall, EmptyActivations, KernelTooLarge, TooShort
from tsfeatbench.kernels import (
    N_FIXED_PATTERNS,
    dilated_convolve,
    first_difference,
    fit_fixed_bank,
    fixed_patterns,
    minirocket_transform,
    multirocket_transform,
    pool,
    rocket_transform,
)


class TestDilatedConvolve:
    def test_hand_convolution(self):
        out = dilated_convolve([1, 2, 3], [1, -1])
        np.testing.assert_allclose(out, [-1, -1])

    def test_identity_kernel(self):
        series = [0.5, -2.0, 3.25]
        np.testing.assert_array_equal(dilated_convolve(series, [1.0]), series)

    def test_dilation_two(self):
        np.testing.assert_allclose(
            dilated_convolve([1, 2, 3, 4], [1, 1], dilation=2), [4, 6]
        )

    def test_padding_preserves_length(self):
        out = dilated_convolve(np.arange(10.0), np.ones(3), dilation=2, padding=True)
        assert len(out) == 10

    def test_bias_subtracted(self):
        np.testing.assert_allclose(
            dilated_convolve([1, 2], [1.0], bias=1.0), [0, 1]
        )

    def test_kernel_too_large(self):
        with pytest.raises(KernelTooLarge):
            dilated_convolve([1, 2, 3], np.ones(9), dilation=2)


class TestPool:
    def test_ppv(self):
        assert pool([1, -1, 3, -3], "ppv") == 0.5

    def test_lspv(self):
        assert pool([-1, 2, 3, -1, 5], "lspv") == 2

    def test_mipv(self):
        assert pool([-1, 2, -1, 4], "mipv") == pytest.approx(2 / 3)

    def test_mipv_no_positives(self):
        assert pool([-1.0, -2.0], "mipv") == 0.0

    def test_mipv_single_element(self):
        assert pool([5.0], "mipv") == 0.0

    def test_mpv(self):
        assert pool([2.0, -1.0, 4.0], "mpv") == 3.0
        assert pool([-2.0, -1.0], "mpv") == 0.0

    def test_max_no_clamping(self):
        assert pool([-3.0, -1.0], "max") == -1.0

    def test_mean(self):
        assert pool([1.0, 2.0, 3.0], "mean") == 2.0

    def test_empty(self):
        with pytest.raises(EmptyActivations):
            pool([], "ppv")

    def test_zero_counts_as_non_positive(self):
        assert pool([0.0, 1.0], "ppv") == 0.5

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=30),
           st.floats(0.001, 5.0))
    @settings(max_examples=50, deadline=None)
    def test_ppv_monotone_in_bias(self, values, delta):
        a = np.array(values)
        assert pool(a - delta, "ppv") <= pool(a, "ppv")

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=30))
    @settings(max_examples=50, deadline=None)
    def test_ppv_positivity_partition(self, values):
        a = np.array(values)
        eps = 1e-6
        assert pool(a, "ppv") + pool(-a - eps, "ppv") <= 1.0 + 1e-12


class TestFirstDifference:
    def test_basic(self):
        np.testing.assert_array_equal(first_difference([1, 3, 6]), [2, 3])

    def test_constant(self):
        np.testing.assert_array_equal(first_difference([5.0] * 4), [0, 0, 0])

    def test_linear_ramp(self):
        np.testing.assert_allclose(first_difference(np.arange(0, 10, 2.5)), 2.5)

    def test_too_short(self):
        with pytest.raises(TooShort):
            first_difference([1.0])


def test_fixed_patterns_shape_and_sum():
    patterns = fixed_patterns()
    assert patterns.shape == (84, 9)
    np.testing.assert_allclose(patterns.sum(axis=1), 0.0)
    assert all(np.sum(p == 2.0) == 3 for p in patterns)
    # all 84 patterns distinct
    assert len({tuple(p) for p in patterns}) == 84


class TestRocket:
    def test_feature_count(self, freq_pair):
        fm = rocket_transform(freq_pair.train, freq_pair.train, n_kernels=500, seed=0)
        assert fm.width == 1000

    def test_determinism(self, small_pair):
        a = rocket_transform(small_pair.train, small_pair.test, 50, seed=9)
        b = rocket_transform(small_pair.train, small_pair.test, 50, seed=9)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.names == b.names

    def test_ppv_columns_in_unit_interval(self, small_pair):
        fm = rocket_transform(small_pair.train, small_pair.test, 50, seed=1)
        ppv_cols = [i for i, n in enumerate(fm.names) if n.endswith("_ppv")]
        assert len(ppv_cols) == 50
        assert np.all(fm.values[:, ppv_cols] >= 0.0)
        assert np.all(fm.values[:, ppv_cols] <= 1.0)

    def test_budget_too_small(self, small_pair):
        with pytest.raises(BudgetTooSmall):
            rocket_transform(small_pair.train, small_pair.test, 0, seed=0)


class TestMinirocket:
    def test_feature_count_924(self, freq_pair):
        fm = minirocket_transform(freq_pair.train, freq_pair.test, 1000, seed=0)
        assert fm.width == 924

    def test_feature_count_multiple_of_84(self, small_pair):
        for budget in (84, 200, 500):
            fm = minirocket_transform(small_pair.train, small_pair.test, budget, seed=0)
            assert fm.width == 84 * (budget // 84)

    def test_bit_identical_repeats(self, small_pair):
        a = minirocket_transform(small_pair.train, small_pair.test, 168, seed=4)
        b = minirocket_transform(small_pair.train, small_pair.test, 168, seed=4)
        assert a.values.tobytes() == b.values.tobytes()

    def test_all_features_unit_interval(self, small_pair):
        fm = minirocket_transform(small_pair.train, small_pair.test, 168, seed=2)
        assert np.all(fm.values >= 0.0) and np.all(fm.values <= 1.0)

    def test_budget_too_small(self, small_pair):
        with pytest.raises(BudgetTooSmall):
            minirocket_transform(small_pair.train, small_pair.test, 83, seed=0)

    def test_bank_fit_on_train_only(self, small_pair):
        # bank fitted from the train split must be identical whichever
        # split is transformed afterwards
        bank_a = fit_fixed_bank(small_pair.train.series, 2, seed=1)
        bank_b = fit_fixed_bank(small_pair.train.series, 2, seed=1)
        np.testing.assert_array_equal(bank_a.biases, bank_b.biases)
        np.testing.assert_array_equal(bank_a.dilations, bank_b.dilations)


class TestMultirocket:
    def test_feature_count_1008(self, freq_pair):
        fm = multirocket_transform(freq_pair.train, freq_pair.test,
                                   n_kernel_instances=125,
                                   features_per_kernel=6, seed=0)
        assert fm.width == 1008

    def test_four_features_per_kernel(self, small_pair):
        fm = multirocket_transform(small_pair.train, small_pair.test,
                                   n_kernel_instances=84,
                                   features_per_kernel=4, seed=0)
        assert fm.width == 84 * 1 * 2 * 4

    def test_diff_of_constant_has_zero_ppv(self):
        from tsfeatbench.dataset import TimeSeriesDataset
        const = TimeSeriesDataset("c", np.full((4, 32), 2.5), ("a", "b") * 2)
        fm = multirocket_transform(const, const, 84, 6, seed=0)
        diff_ppv = [i for i, n in enumerate(fm.names)
                    if n.startswith("multirocket_diff") and n.endswith("_ppv")]
        # diff of a constant is all zeros; zero never counts as positive
        assert np.all(fm.values[:, diff_ppv] == 0.0)

    def test_determinism(self, small_pair):
        a = multirocket_transform(small_pair.train, small_pair.test, 84, 4, seed=3)
        b = multirocket_transform(small_pair.train, small_pair.test, 84, 4, seed=3)
        np.testing.assert_array_equal(a.values, b.values)

    def test_invalid_features_per_kernel(self, small_pair):
        with pytest.raises(BudgetTooSmall):
            multirocket_transform(small_pair.train, small_pair.test, 84, 5, seed=0)
