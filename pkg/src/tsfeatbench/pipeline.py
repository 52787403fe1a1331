"""Assemble extractors and classifiers into benchmark strategies.

An extractor is configured by kind + parameters + seed and always fits on
the train split only.  Strategies decide what the classifier sees: the raw
series (RAW), the extracted features (FTS) or their concatenation
(RAW_PLUS_FTS).  ``run`` executes one cell of a benchmark grid and records
per-stage wall times.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import intervals as intervals_mod
from . import kernels as kernels_mod
from . import signature as signature_mod
from .classifiers import accuracy, predict, train_classifier
from .dataset import SplitPair, TimeSeriesDataset
from .errors import EmptyPool, RowMismatch, UnknownPreset
from .featurebank import FEATURE_NAMES, compute_bank
from .features import FeatureMatrix

EXTRACTOR_KINDS = (
    "rocket", "minirocket", "multirocket",
    "intervals_summary", "intervals_bank",
    "featurebank_global", "signature",
)

STRATEGIES = ("RAW", "FTS", "RAW_PLUS_FTS")

DEFAULT_FEATURE_CAP = 1000

PRESETS = {
    # the global 22-feature bank is the weakest small set and is excluded
    # from every preset, mirroring the exclusion of tiny standalone banks
    "Features": ("minirocket", "intervals_summary", "intervals_bank", "signature"),
    "Features_noROCKET": ("intervals_summary", "intervals_bank", "signature"),
    # faster analog: keeps the cheap extractors, drops the slowest one
    "Features_python-analog": ("minirocket", "intervals_summary", "intervals_bank"),
}


@dataclass(frozen=True)
class ExtractorConfig:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    feature_cap: int = DEFAULT_FEATURE_CAP

    def __post_init__(self):
        if self.kind not in EXTRACTOR_KINDS:
            raise UnknownPreset(
                f"unknown extractor {self.kind!r}; choose from {EXTRACTOR_KINDS}"
            )


@dataclass(frozen=True)
class ExtractedFeatures:
    train: FeatureMatrix
    test: FeatureMatrix
    nonfinite_replaced: int


@dataclass
class PipelineResult:
    dataset: str
    extractors: tuple
    classifier: str
    strategy: str
    accuracy: float
    extract_train_time: float
    extract_test_time: float
    fit_time: float
    predict_time: float
    feature_count: int
    seed: int
    nonfinite_replaced: int = 0

    def deterministic_fields(self) -> dict:
        """Everything except wall times; equal across reruns with one seed."""
        d = dataclasses.asdict(self)
        for key in ("extract_train_time", "extract_test_time",
                    "fit_time", "predict_time"):
            d.pop(key)
        return d

    def to_json(self) -> str:
        d = dataclasses.asdict(self)
        d["extractors"] = list(self.extractors)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PipelineResult":
        d = json.loads(text)
        d["extractors"] = tuple(d["extractors"])
        return cls(**d)


def _global_bank(dataset: TimeSeriesDataset) -> FeatureMatrix:
    values = np.vstack([compute_bank(row) for row in dataset.series])
    return FeatureMatrix(values=values, names=tuple(f"bank_{n}" for n in FEATURE_NAMES))


def _dispatch(config: ExtractorConfig, pair: SplitPair):
    kind, p, seed = config.kind, config.params, config.seed
    if kind == "rocket":
        fn = lambda ds: kernels_mod.rocket_transform(
            pair.train, ds, n_kernels=p.get("n_kernels", 500), seed=seed)
    elif kind == "minirocket":
        fn = lambda ds: kernels_mod.minirocket_transform(
            pair.train, ds, feature_budget=p.get("feature_budget", 1000), seed=seed)
    elif kind == "multirocket":
        fn = lambda ds: kernels_mod.multirocket_transform(
            pair.train, ds,
            n_kernel_instances=p.get("n_kernel_instances", 125),
            features_per_kernel=p.get("features_per_kernel", 6), seed=seed)
    elif kind == "intervals_summary":
        iset = intervals_mod.sample_intervals(
            pair.train.m, p.get("n_intervals", 100),
            p.get("min_len", 3), seed=seed)
        aggs = tuple(p.get("aggregations", intervals_mod.SUMMARY_AGGREGATIONS))
        fn = lambda ds: intervals_mod.interval_summary_transform(ds, iset, aggs)
    elif kind == "intervals_bank":
        iset = intervals_mod.sample_intervals(
            pair.train.m, p.get("n_intervals", 45),
            p.get("min_len", 3), seed=seed)
        fn = lambda ds: intervals_mod.interval_bank_transform(ds, iset)
    elif kind == "featurebank_global":
        fn = _global_bank
    elif kind == "signature":
        fn = lambda ds: signature_mod.signature_transform(
            ds, sig_depth=p.get("sig_depth", 4),
            window_depth=p.get("window_depth", 4))
    else:  # unreachable; ExtractorConfig validates kind
        raise UnknownPreset(kind)
    return fn


def _sanitize(matrix: FeatureMatrix, cap: int):
    values = matrix.values
    names = matrix.names
    if values.shape[1] > cap:
        values = values[:, :cap]
        names = names[:cap]
    bad = ~np.isfinite(values)
    replaced = int(bad.sum())
    if replaced:
        values = np.where(bad, 0.0, values)
    return FeatureMatrix(values=values, names=names), replaced


def extract(config: ExtractorConfig, pair: SplitPair) -> ExtractedFeatures:
    """Fit on train only, transform both splits; identical column schema.

    Non-finite feature values are replaced by 0 and counted.
    """
    fn = _dispatch(config, pair)
    train_fm, train_bad = _sanitize(fn(pair.train), config.feature_cap)
    test_fm, test_bad = _sanitize(fn(pair.test), config.feature_cap)
    assert train_fm.names == test_fm.names
    return ExtractedFeatures(train=train_fm, test=test_fm,
                             nonfinite_replaced=train_bad + test_bad)


def _raw_matrix(dataset: TimeSeriesDataset) -> FeatureMatrix:
    names = tuple(f"raw[t{i}]" for i in range(dataset.m))
    return FeatureMatrix(values=dataset.series, names=names)


def apply_strategy(strategy: str, pair: SplitPair, features: ExtractedFeatures = None):
    """Build the tabular (train, test) pair for one strategy.

    RAW width = m, FTS width = F, RAW_PLUS_FTS width = F + m with the raw
    columns appended after the feature columns.
    """
    if strategy not in STRATEGIES:
        raise UnknownPreset(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    raw_train, raw_test = _raw_matrix(pair.train), _raw_matrix(pair.test)
    if strategy == "RAW":
        return raw_train, raw_test
    if features is None:
        raise RowMismatch(f"strategy {strategy} requires extracted features")
    if features.train.n != pair.train.n or features.test.n != pair.test.n:
        raise RowMismatch("feature rows do not match dataset rows")
    if strategy == "FTS":
        return features.train, features.test
    return features.train.hstack(raw_train), features.test.hstack(raw_test)


def stack_features(parts) -> ExtractedFeatures:
    """Column-concatenate extractions in the given order."""
    parts = list(parts)
    if not parts:
        raise EmptyPool("nothing to stack")
    train, test, bad = parts[0].train, parts[0].test, parts[0].nonfinite_replaced
    for part in parts[1:]:
        train = train.hstack(part.train)
        test = test.hstack(part.test)
        bad += part.nonfinite_replaced
    return ExtractedFeatures(train=train, test=test, nonfinite_replaced=bad)


def greedy_stack(pool, scores, k: int):
    """Top-k extractor configs by score (descending, stable on ties).

    ``scores`` are accuracies of a vanilla random forest on each extractor
    alone.  Duplicate kinds in the pool are rejected.
    """
    pool = list(pool)
    if not pool:
        raise EmptyPool("empty extractor pool")
    kinds = [c.kind for c in pool]
    if len(set(kinds)) != len(kinds):
        raise ValueError("duplicate extractor kinds in the pool")
    if not 1 <= k <= len(pool):
        raise EmptyPool(f"k must be in 1..{len(pool)}, got {k}")
    if len(scores) != len(pool):
        raise ValueError("one score per pool entry required")
    order = sorted(range(len(pool)), key=lambda i: (-scores[i], i))
    return [pool[i] for i in order[:k]]


def preset(name: str, seed: int = 0):
    """Named extractor lists used by the combined-features strategies."""
    if name not in PRESETS:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return [
        ExtractorConfig(kind=kind, seed=seed + i)
        for i, kind in enumerate(PRESETS[name])
    ]


def run(pair: SplitPair, configs, classifier: str, strategy: str,
        seed: int = 0, classifier_params: dict = None) -> PipelineResult:
    """Execute one benchmark cell and time each stage separately."""
    configs = list(configs)
    classifier_params = classifier_params or {}

    extractions = []
    extract_train_time = 0.0
    extract_test_time = 0.0
    if strategy != "RAW":
        for config in configs:
            fn = _dispatch(config, pair)
            t0 = time.perf_counter()
            train_fm, train_bad = _sanitize(fn(pair.train), config.feature_cap)
            t1 = time.perf_counter()
            test_fm, test_bad = _sanitize(fn(pair.test), config.feature_cap)
            extract_test_time += time.perf_counter() - t1
            extract_train_time += t1 - t0
            extractions.append(ExtractedFeatures(
                train=train_fm, test=test_fm,
                nonfinite_replaced=train_bad + test_bad))

    features = stack_features(extractions) if extractions else None
    train_fm, test_fm = apply_strategy(strategy, pair, features)

    t1 = time.perf_counter()
    model = train_classifier(classifier, train_fm.values, pair.train.labels,
                             seed=seed, **classifier_params)
    fit_time = time.perf_counter() - t1

    t2 = time.perf_counter()
    predicted = predict(model, test_fm.values)
    predict_time = time.perf_counter() - t2

    return PipelineResult(
        dataset=pair.train.name,
        extractors=tuple(c.kind for c in configs) if strategy != "RAW" else (),
        classifier=classifier,
        strategy=strategy,
        accuracy=accuracy(predicted, pair.test.labels),
        extract_train_time=extract_train_time,
        extract_test_time=extract_test_time,
        fit_time=fit_time,
        predict_time=predict_time,
        feature_count=train_fm.width,
        seed=seed,
        nonfinite_replaced=features.nonfinite_replaced if features else 0,
    )
