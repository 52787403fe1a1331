import numpy as np
import pytest

from tsfeatbench.dataset import synthesize


@pytest.fixture(scope="session")
def freq_pair():
    return synthesize("freq-two-class", 20, 128, seed=7)


@pytest.fixture(scope="session")
def small_pair():
    return synthesize("freq-two-class", 12, 32, seed=3)


@pytest.fixture(scope="session")
def blobs():
    """Two linearly separable Gaussian blobs (n=100, F=5, 6-sigma gap)."""
    rng = np.random.default_rng(42)
    n_half = 50
    a = rng.normal(0.0, 1.0, size=(n_half, 5))
    b = rng.normal(6.0, 1.0, size=(n_half, 5))
    X = np.vstack([a, b])
    y = tuple(["a"] * n_half + ["b"] * n_half)
    return X, y


@pytest.fixture(scope="session")
def xor_data():
    """Tabular XOR: 4 clusters on 2 features, n=200."""
    rng = np.random.default_rng(11)
    centers = [(0, 0, "a"), (4, 4, "a"), (0, 4, "b"), (4, 0, "b")]
    X, y = [], []
    for cx, cy, label in centers:
        pts = rng.normal([cx, cy], 0.5, size=(50, 2))
        X.append(pts)
        y.extend([label] * 50)
    return np.vstack(X), tuple(y)
