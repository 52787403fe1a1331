import numpy as np
import pytest

from tsfeatbench.dataset import synthesize, TimeSeriesDataset
from tsfeatbench.errors import DimensionMismatch, PathTooShort, SeriesTooShort
from tsfeatbench.signature import (
    TensorSignature,
    chen_concat,
    dyadic_windows,
    segment_signature,
    signature,
    signature_transform,
    time_augment,
    zero_signature,
)


def quadrature_signature(points, depth, subdivisions=200000):
    """Independent oracle: nested midpoint quadrature of the iterated
    integrals of the piecewise-linear path through ``points``.

    The subdivision count is rounded up to a multiple of the segment count
    so the piecewise-constant derivative is smooth on every cell.
    """
    pts = np.asarray(points, dtype=np.float64)
    n_seg = pts.shape[0] - 1
    d = pts.shape[1]
    M = int(np.ceil(subdivisions / n_seg)) * n_seg
    h = 1.0 / M
    mids = (np.arange(M) + 0.5) * h
    seg_of = np.minimum((mids * n_seg).astype(int), n_seg - 1)
    derivs = (pts[1:] - pts[:-1]) * n_seg        # (n_seg, d), df/dt per segment
    deriv_at_mid = derivs[seg_of]                # (M, d)

    levels = []
    # state: dict word(tuple) -> I_word evaluated at midpoints
    prev = {(): np.ones(M)}
    for _ in range(depth):
        current = {}
        for word, inner in prev.items():
            for channel in range(d):
                g = inner * deriv_at_mid[:, channel]
                csum = np.concatenate([[0.0], np.cumsum(g)[:-1]])
                current[word + (channel,)] = h * csum + 0.5 * h * g
        # store the completed integrals I_word(1)
        level_words = sorted(current)
        values = []
        for word in level_words:
            inner = prev[word[:-1]]
            g = inner * deriv_at_mid[:, word[-1]]
            values.append(h * np.sum(g))
        levels.append(np.array(values))
        prev = current
    return np.concatenate(levels)


class TestSegmentSignature:
    def test_zero_increment(self):
        sig = segment_signature([0.0, 0.0], 3)
        assert np.all(sig.flatten() == 0.0)

    def test_unit_increment_depth_two(self):
        sig = segment_signature([1.0, 1.0], 2)
        np.testing.assert_allclose(sig.levels[0], [1.0, 1.0])
        np.testing.assert_allclose(sig.levels[1], [0.5, 0.5, 0.5, 0.5])

    def test_single_channel_powers(self):
        sig = segment_signature([2.0, 0.0], 3)
        # nonzero terms only on pure-first-channel words: 2, 2, 4/3
        assert sig.levels[0][0] == pytest.approx(2.0)
        assert sig.levels[1][0] == pytest.approx(2.0)
        assert sig.levels[2][0] == pytest.approx(4.0 / 3.0)
        flat = sig.flatten()
        pure = {0, 2, 6}  # flat offsets of words 1, 11, 111
        for i, v in enumerate(flat):
            if i not in pure:
                assert v == 0.0

    def test_term_count(self):
        sig = segment_signature([1.0, 2.0], 4)
        assert sig.term_count() == 30
        assert len(sig.flatten()) == 30


class TestChenConcat:
    def test_identity_element(self):
        sig = segment_signature([1.5, -0.5], 3)
        zero = zero_signature(2, 3)
        for combined in (chen_concat(sig, zero), chen_concat(zero, sig)):
            for a, b in zip(combined.levels, sig.levels):
                np.testing.assert_allclose(a, b)

    def test_level_one_additivity(self):
        a = segment_signature([1.0, 2.0], 3)
        b = segment_signature([-0.5, 4.0], 3)
        combined = chen_concat(a, b)
        np.testing.assert_allclose(combined.levels[0],
                                   a.levels[0] + b.levels[0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            chen_concat(segment_signature([1.0, 2.0], 2),
                        segment_signature([1.0], 2))

    def test_two_segments_vs_quadrature(self):
        pts = np.array([[0.0, 0.0], [0.4, 1.0], [1.0, 0.5]])
        sig = signature(pts, 3)
        oracle = quadrature_signature(pts, 3)
        np.testing.assert_allclose(sig.flatten(), oracle, rtol=1e-9, atol=1e-9)


class TestSignature:
    def test_level_one_is_total_increment(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(8, 2))
        sig = signature(pts, 4)
        np.testing.assert_allclose(sig.levels[0], pts[-1] - pts[0], rtol=1e-14)

    def test_two_point_path_is_segment(self):
        pts = np.array([[0.0, 1.0], [1.0, 3.0]])
        a = signature(pts, 3).flatten()
        b = segment_signature(pts[1] - pts[0], 3).flatten()
        np.testing.assert_array_equal(a, b)

    def test_path_too_short(self):
        with pytest.raises(PathTooShort):
            signature(np.zeros((1, 2)), 2)

    def test_chen_identity_over_split_points(self):
        rng = np.random.default_rng(17)
        pts = rng.normal(size=(10, 2))
        full = signature(pts, 4).flatten()
        for split in range(1, 9):
            left = signature(pts[: split + 1], 4)
            right = signature(pts[split:], 4)
            combined = chen_concat(left, right).flatten()
            np.testing.assert_allclose(combined, full, rtol=1e-12, atol=1e-12)

    def test_quadrature_oracle_random_paths(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            n_pts = rng.integers(3, 9)
            pts = rng.normal(size=(n_pts, 2))
            sig = signature(pts, 3).flatten()
            oracle = quadrature_signature(pts, 3)
            np.testing.assert_allclose(sig, oracle, rtol=1e-6, atol=1e-8)

    def test_pure_x_words_sampling_invariant(self):
        # monotone reparameterization of the time channel with identical x
        # samples and endpoints only changes time-dependent words
        x = np.array([0.0, 1.0, -0.5, 2.0, 1.5])
        t_uniform = np.linspace(0.0, 1.0, 5)
        t_warped = t_uniform**2  # monotone, same endpoints
        sig_a = signature(np.column_stack([t_uniform, x]), 3)
        sig_b = signature(np.column_stack([t_warped, x]), 3)
        # pure-x words: channel index 1 repeated; flat offset = d^k - 1
        for k in (1, 2, 3):
            idx = 2**k - 1
            assert sig_a.levels[k - 1][idx] == pytest.approx(
                sig_b.levels[k - 1][idx], rel=1e-12)


class TestDyadicWindows:
    def test_depth_four_gives_31(self):
        assert len(dyadic_windows(128, 4)) == 31

    def test_depth_zero_whole_series(self):
        assert dyadic_windows(50, 0) == [(0, 49)]

    def test_each_level_partitions_segments(self):
        windows = dyadic_windows(100, 3)
        offset = 0
        for level in range(4):
            count = 2**level
            level_windows = windows[offset:offset + count]
            offset += count
            assert level_windows[0][0] == 0
            assert level_windows[-1][1] == 99
            for (s1, e1), (s2, e2) in zip(level_windows, level_windows[1:]):
                assert e1 == s2

    def test_near_equal_sizes(self):
        windows = dyadic_windows(101, 4)
        sizes = [e - s for s, e in windows[15:]]
        assert max(sizes) - min(sizes) <= 1

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            dyadic_windows(16, 4)


class TestSignatureTransform:
    def test_feature_count_930(self):
        pair = synthesize("noise-only", 4, 128, seed=0)
        fm = signature_transform(pair.train)
        assert fm.width == 930

    def test_constant_series_non_time_words_zero(self):
        ds = TimeSeriesDataset("c", np.full((2, 32), 3.0), ("a", "b"))
        fm = signature_transform(ds, sig_depth=3, window_depth=2)
        for name, value in zip(fm.names, fm.values[0]):
            word = name.rsplit("_", 1)[1]
            if "2" in word:  # any word touching the x channel
                assert value == pytest.approx(0.0, abs=1e-14)

    def test_deterministic(self):
        pair = synthesize("freq-two-class", 6, 64, seed=1)
        a = signature_transform(pair.train)
        b = signature_transform(pair.train)
        assert a.values.tobytes() == b.values.tobytes()

    def test_time_augmentation(self):
        path = time_augment([5.0, 6.0, 7.0])
        np.testing.assert_allclose(path[:, 0], [0.0, 0.5, 1.0])
        np.testing.assert_allclose(path[:, 1], [5.0, 6.0, 7.0])
