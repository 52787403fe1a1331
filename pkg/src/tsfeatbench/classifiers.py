"""Tabular classification layer applied to feature matrices.

Five classifier kinds cover the benchmark roster: ridge (leave-one-out
alpha selection), logistic regression (l2 or elasticnet), 1-nearest
neighbor, random forest and rotation forest.  Linear classifiers and 1-NN
expect standardized inputs; tree ensembles consume raw features (their
splits are scale-invariant).  ``train_classifier`` applies that rule.

Ridge, logistic and random forest delegate to scikit-learn behind this
module's interface; the rotation forest is built here on CART base trees.
"""

from __future__ import annotations

import pickle
import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import LogisticRegression, RidgeClassifierCV
from sklearn.tree import DecisionTreeClassifier

from .errors import ClassMissing, NotConverged, WidthMismatch

CLASSIFIER_KINDS = ("ridge", "logistic", "1nn", "random_forest", "rotation_forest")

MODEL_FORMAT = "tsfeatbench-model"
MODEL_VERSION = 1


@dataclass
class Standardizer:
    """Per-column mean/std fitted on train; zero-variance columns map to 0."""

    mean: np.ndarray = None
    scale: np.ndarray = None

    def fit(self, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0.0, std, 1.0)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != len(self.mean):
            raise WidthMismatch(
                f"expected {len(self.mean)} columns, got {X.shape[1]}"
            )
        return (X - self.mean) / self.scale

    def fit_transform(self, X: np.ndarray) -> np.ndarray:
        return self.fit(X).transform(X)


@dataclass
class TrainedModel:
    kind: str
    classes: tuple                  # label strings, sorted; index = class code
    inner: object                   # fitted estimator state
    n_features: int
    standardizer: Standardizer = None

    def class_codes(self, labels) -> np.ndarray:
        lookup = {c: i for i, c in enumerate(self.classes)}
        return np.array([lookup[l] for l in labels])


def _encode_labels(y):
    classes = tuple(sorted(set(y)))
    if len(classes) < 2:
        raise ClassMissing(f"need at least 2 classes, got {len(classes)}")
    lookup = {c: i for i, c in enumerate(classes)}
    return classes, np.array([lookup[l] for l in y])


def fit_ridge(X, y, alpha_grid=None) -> TrainedModel:
    """One-vs-rest ridge on +/-1 targets; alpha picked by efficient LOO error
    over a log grid spanning 1e-3 .. 1e3."""
    X = np.asarray(X, dtype=np.float64)
    classes, codes = _encode_labels(y)
    if alpha_grid is None:
        alpha_grid = np.logspace(-3, 3, 10)
    est = RidgeClassifierCV(alphas=alpha_grid)
    est.fit(X, codes)
    return TrainedModel(kind="ridge", classes=classes, inner=est,
                        n_features=X.shape[1])


def fit_logistic(X, y, penalty: str = "l2", lam: float = 1.0,
                 l1_ratio: float = 0.5, tol: float = 1e-4,
                 max_iter: int = 1000) -> TrainedModel:
    """Multinomial logistic regression; elasticnet uses the saga solver."""
    X = np.asarray(X, dtype=np.float64)
    classes, codes = _encode_labels(y)
    if penalty == "l2":
        est = LogisticRegression(penalty="l2", C=1.0 / lam, tol=tol,
                                 max_iter=max_iter, solver="lbfgs")
    elif penalty == "elasticnet":
        est = LogisticRegression(penalty="elasticnet", C=1.0 / lam,
                                 l1_ratio=l1_ratio, tol=tol,
                                 max_iter=max_iter, solver="saga",
                                 random_state=0)
    else:
        raise ValueError(f"penalty must be 'l2' or 'elasticnet', got {penalty!r}")
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConvergenceWarning)
        try:
            est.fit(X, codes)
        except ConvergenceWarning:
            warnings.warn("logistic regression hit max_iter", NotConverged)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ConvergenceWarning)
                est.fit(X, codes)
    return TrainedModel(kind="logistic", classes=classes, inner=est,
                        n_features=X.shape[1])


def fit_1nn(X, y) -> TrainedModel:
    """Euclidean nearest neighbor; distance ties go to the lowest train index."""
    X = np.asarray(X, dtype=np.float64)
    classes = tuple(sorted(set(y)))
    lookup = {c: i for i, c in enumerate(classes)}
    codes = np.array([lookup[l] for l in y])
    return TrainedModel(kind="1nn", classes=classes,
                        inner={"X": X.copy(), "codes": codes},
                        n_features=X.shape[1])


def fit_random_forest(X, y, n_trees: int = 100, seed: int = 0) -> TrainedModel:
    """Bootstrap CART forest, sqrt(F) candidate features per split."""
    X = np.asarray(X, dtype=np.float64)
    classes, codes = _encode_labels(y)
    est = RandomForestClassifier(n_estimators=n_trees, max_features="sqrt",
                                 bootstrap=True, random_state=seed)
    est.fit(X, codes)
    return TrainedModel(kind="random_forest", classes=classes, inner=est,
                        n_features=X.shape[1])


@dataclass
class _RotationTree:
    rotation: np.ndarray            # F x F orthogonal block matrix
    tree: DecisionTreeClassifier


def _subset_rotation(block: np.ndarray) -> np.ndarray:
    """Principal-axes rotation of one feature subset, identity on degeneracy."""
    if block.shape[0] < 2 or np.allclose(block.var(axis=0), 0.0):
        return np.eye(block.shape[1])
    cov = np.cov(block, rowvar=False)
    cov = np.atleast_2d(cov)
    if not np.all(np.isfinite(cov)):
        return np.eye(block.shape[1])
    _, vecs = np.linalg.eigh(cov)
    return vecs


def fit_rotation_forest(X, y, n_trees: int = 50, subset_size: int = 3,
                        seed: int = 0) -> TrainedModel:
    """Forest of CART trees, each trained on per-subset principal-axes
    rotations computed from a bootstrap class-subsample."""
    X = np.asarray(X, dtype=np.float64)
    classes, codes = _encode_labels(y)
    n, F = X.shape
    if not (2 <= subset_size <= F):
        raise ValueError(f"need F >= subset_size >= 2, got F={F}, subset_size={subset_size}")
    rng = np.random.default_rng(seed)
    trees = []
    for t in range(n_trees):
        order = rng.permutation(F)
        groups = [order[i:i + subset_size] for i in range(0, F, subset_size)]
        rotation = np.zeros((F, F))
        for group in groups:
            # bootstrap a random nonempty class subset, then 75% of its rows
            class_ids = np.flatnonzero(rng.random(len(classes)) < 0.5)
            if class_ids.size == 0:
                class_ids = np.array([rng.integers(len(classes))])
            row_pool = np.flatnonzero(np.isin(codes, class_ids))
            if row_pool.size == 0:
                row_pool = np.arange(n)
            take = max(int(0.75 * row_pool.size), 2)
            rows = rng.choice(row_pool, size=take, replace=True)
            block_rot = _subset_rotation(X[np.ix_(rows, group)])
            rotation[np.ix_(group, group)] = block_rot
        tree = DecisionTreeClassifier(criterion="gini", random_state=t)
        tree.fit(X @ rotation, codes)
        trees.append(_RotationTree(rotation=rotation, tree=tree))
    return TrainedModel(kind="rotation_forest", classes=classes,
                        inner={"trees": trees, "n_classes": len(classes)},
                        n_features=F)


def _predict_codes(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    if model.kind in ("ridge", "logistic", "random_forest"):
        return model.inner.predict(X)
    if model.kind == "1nn":
        train = model.inner["X"]
        codes = model.inner["codes"]
        out = np.empty(X.shape[0], dtype=int)
        for i, row in enumerate(X):
            d2 = np.sum((train - row) ** 2, axis=1)
            out[i] = codes[int(np.argmin(d2))]  # argmin ties -> lowest index
        return out
    if model.kind == "rotation_forest":
        inner = model.inner
        votes = np.zeros((X.shape[0], inner["n_classes"]), dtype=int)
        for rt in inner["trees"]:
            pred = rt.tree.predict(X @ rt.rotation).astype(int)
            votes[np.arange(X.shape[0]), pred] += 1
        return np.argmax(votes, axis=1)  # ties -> lowest class code
    raise ValueError(f"unknown model kind {model.kind!r}")


def predict(model: TrainedModel, X) -> tuple:
    """Predict label strings for every row of X."""
    X = np.asarray(X, dtype=np.float64)
    if model.standardizer is not None:
        X = model.standardizer.transform(X)
    elif X.shape[1] != model.n_features:
        raise WidthMismatch(
            f"model expects {model.n_features} columns, got {X.shape[1]}"
        )
    codes = _predict_codes(model, X)
    return tuple(model.classes[c] for c in codes)


def accuracy(predicted, truth) -> float:
    predicted = list(predicted)
    truth = list(truth)
    if len(predicted) != len(truth):
        raise WidthMismatch(f"{len(predicted)} predictions for {len(truth)} labels")
    if not truth:
        raise WidthMismatch("empty label vectors")
    return sum(p == t for p, t in zip(predicted, truth)) / len(truth)


def train_classifier(kind: str, X, y, seed: int = 0, **params) -> TrainedModel:
    """Fit one of the roster classifiers, standardizing where required.

    Ridge, logistic and 1-NN see standardized columns (train statistics
    only); random and rotation forests see raw features.
    """
    X = np.asarray(X, dtype=np.float64)
    standardizer = None
    if kind in ("ridge", "logistic", "1nn"):
        standardizer = Standardizer().fit(X)
        X = standardizer.transform(X)
    if kind == "ridge":
        model = fit_ridge(X, y, **params)
    elif kind == "logistic":
        model = fit_logistic(X, y, **params)
    elif kind == "1nn":
        model = fit_1nn(X, y, **params)
    elif kind == "random_forest":
        model = fit_random_forest(X, y, seed=seed, **params)
    elif kind == "rotation_forest":
        model = fit_rotation_forest(X, y, seed=seed, **params)
    else:
        raise ValueError(f"unknown classifier kind {kind!r}; choose from {CLASSIFIER_KINDS}")
    model.standardizer = standardizer
    return model


def save_model(model: TrainedModel, path: str) -> None:
    """Serialize a trained model; round-trips must reproduce predictions."""
    payload = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "model": model}
    with open(path, "wb") as fh:
        pickle.dump(payload, fh)


def load_model(path: str) -> TrainedModel:
    with open(path, "rb") as fh:
        payload = pickle.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path} is not a {MODEL_FORMAT} file")
    if payload.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {payload.get('version')}")
    return payload["model"]
