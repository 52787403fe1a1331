"""Labeled equal-length univariate time-series datasets with fixed train/test splits.

Datasets are immutable after construction and safe for concurrent shared
reads.  Series values are never normalized here; standardization is the
classifier layer's job.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidSize,
    MalformedHeader,
    MissingValue,
    UnequalLength,
    UnknownLabel,
)

DATA_DIR_ENV = "TSFEATBENCH_DATA_DIR"

SYNTH_KINDS = ("freq-two-class", "bump-location", "noise-only")


@dataclass(frozen=True)
class TimeSeriesDataset:
    """n equal-length univariate real-valued series with categorical labels.

    Attributes
    ----------
    name : str
        Problem name.
    series : ndarray of shape (n, m)
        Finite real values; all rows share the length m.
    labels : tuple of str
        One opaque class identifier per row.  Labels are mapped to dense
        integer codes only at training time.
    split : str
        Either ``"train"`` or ``"test"``.
    """

    name: str
    series: np.ndarray
    labels: tuple
    split: str = "train"

    def __post_init__(self):
        arr = np.asarray(self.series, dtype=np.float64)
        if arr.ndim != 2:
            raise InvalidSize(f"series must be 2-d, got ndim={arr.ndim}")
        if arr.shape[1] < 2:
            raise InvalidSize(f"series length must be >= 2, got {arr.shape[1]}")
        if not np.all(np.isfinite(arr)):
            raise MissingValue("series contain NaN or Inf values")
        if len(self.labels) != arr.shape[0]:
            raise InvalidSize(
                f"{len(self.labels)} labels for {arr.shape[0]} series"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "series", arr)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        if self.split not in ("train", "test"):
            raise InvalidSize(f"split must be 'train' or 'test', got {self.split!r}")

    @property
    def n(self) -> int:
        return self.series.shape[0]

    @property
    def m(self) -> int:
        return self.series.shape[1]

    @property
    def classes(self) -> tuple:
        """Distinct labels in first-appearance order."""
        seen = dict.fromkeys(self.labels)
        return tuple(seen)

    def __eq__(self, other):
        if not isinstance(other, TimeSeriesDataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.split == other.split
            and self.labels == other.labels
            and self.series.shape == other.series.shape
            and bool(np.all(self.series == other.series))
        )


@dataclass(frozen=True)
class SplitPair:
    """A train/test pair over the same problem."""

    train: TimeSeriesDataset
    test: TimeSeriesDataset

    def __post_init__(self):
        if self.train.m != self.test.m:
            raise UnequalLength(
                f"train m={self.train.m} != test m={self.test.m}"
            )
        missing = set(self.test.labels) - set(self.train.labels)
        if missing:
            raise UnknownLabel(
                f"test labels {sorted(missing)} never appear in train"
            )


def _parse_float(token: str, where: str) -> float:
    token = token.strip()
    if token == "" or token == "?":
        raise MissingValue(f"missing value at {where}")
    try:
        value = float(token)
    except ValueError:
        raise MissingValue(f"non-numeric value {token!r} at {where}") from None
    if not np.isfinite(value):
        raise MissingValue(f"non-finite value {token!r} at {where}")
    return value


def parse_ts_file(text: str, name: str = "unnamed", split: str = "train") -> TimeSeriesDataset:
    """Parse one half of a UCR-archive ``.ts`` file.

    Header lines start with ``@``; data records follow ``@data`` as
    ``v1,v2,...,vm:label``.  Series length is inferred from the first record.
    """
    lines = text.splitlines()
    header_labels = None
    declared_length = None
    data_start = None
    for i, raw in enumerate(lines):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("@"):
            raise MalformedHeader(f"unexpected content before @data: {line!r}")
        directive, _, rest = line.partition(" ")
        directive = directive.lower()
        rest = rest.strip()
        if directive == "@problemname" and rest:
            name = rest
        elif directive == "@univariate":
            if rest.lower() not in ("true", ""):
                raise MalformedHeader("only univariate problems are supported")
        elif directive == "@classlabel":
            parts = rest.split()
            if not parts or parts[0].lower() != "true":
                raise MalformedHeader("@classLabel must be 'true <labels...>'")
            header_labels = set(parts[1:])
        elif directive == "@serieslength":
            try:
                declared_length = int(rest)
            except ValueError:
                raise MalformedHeader(f"bad @seriesLength: {rest!r}") from None
        elif directive == "@data":
            data_start = i + 1
            break
        # other directives (@timeStamps, @missing, ...) are tolerated
    if data_start is None:
        raise MalformedHeader("no @data section found")

    rows = []
    labels = []
    m = declared_length
    for lineno, raw in enumerate(lines[data_start:], start=data_start + 1):
        line = raw.strip()
        if not line:
            continue
        values_part, sep, label = line.rpartition(":")
        if not sep:
            raise MalformedHeader(f"line {lineno}: record has no ':label' suffix")
        label = label.strip()
        if header_labels is not None and label not in header_labels:
            raise UnknownLabel(f"line {lineno}: label {label!r} not in @classLabel")
        tokens = values_part.split(",")
        row = [_parse_float(t, f"line {lineno}") for t in tokens]
        if m is None:
            m = len(row)
        elif len(row) != m:
            raise UnequalLength(
                f"line {lineno}: record length {len(row)} != {m}"
            )
        rows.append(row)
        labels.append(label)
    if not rows:
        raise MalformedHeader("no data records found")
    return TimeSeriesDataset(name=name, series=np.array(rows), labels=tuple(labels), split=split)


def serialize_ts(dataset: TimeSeriesDataset) -> str:
    """Render a dataset as ``.ts`` text; inverse of :func:`parse_ts_file`."""
    out = [
        f"@problemName {dataset.name}",
        "@univariate true",
        f"@seriesLength {dataset.m}",
        "@classLabel true " + " ".join(dataset.classes),
        "@data",
    ]
    for row, label in zip(dataset.series, dataset.labels):
        out.append(",".join(repr(float(v)) for v in row) + ":" + label)
    return "\n".join(out) + "\n"


def parse_csv(text: str, name: str = "unnamed", split: str = "train") -> TimeSeriesDataset:
    """Parse label-first CSV: one series per line, ``label,v1,...,vm``."""
    rows = []
    labels = []
    m = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip("\r").strip()
        if not line:
            continue
        tokens = line.split(",")
        if len(tokens) < 2:
            raise MalformedHeader(f"line {lineno}: need a label and at least one value")
        labels.append(tokens[0].strip())
        row = [_parse_float(t, f"line {lineno}") for t in tokens[1:]]
        if m is None:
            m = len(row)
        elif len(row) != m:
            raise UnequalLength(f"line {lineno}: record length {len(row)} != {m}")
        rows.append(row)
    if not rows:
        raise MalformedHeader("empty CSV input")
    return TimeSeriesDataset(name=name, series=np.array(rows), labels=tuple(labels), split=split)


def serialize_csv(dataset: TimeSeriesDataset) -> str:
    lines = [
        label + "," + ",".join(repr(float(v)) for v in row)
        for row, label in zip(dataset.series, dataset.labels)
    ]
    return "\n".join(lines) + "\n"


def load_split_pair(directory: str, name: str) -> SplitPair:
    """Load ``<name>_TRAIN.ts`` / ``<name>_TEST.ts`` from a dataset directory.

    ``directory`` may be None, in which case the environment variable
    ``TSFEATBENCH_DATA_DIR`` must point at the dataset root.
    """
    if directory is None:
        directory = os.environ.get(DATA_DIR_ENV)
        if not directory:
            raise MalformedHeader(
                f"no dataset directory given and ${DATA_DIR_ENV} is unset"
            )
    base = os.path.join(directory, name)
    if os.path.isdir(base):
        directory = base
    paths = {}
    for split, suffix in (("train", "_TRAIN.ts"), ("test", "_TEST.ts")):
        path = os.path.join(directory, name + suffix)
        if not os.path.exists(path):
            raise MalformedHeader(f"missing {path}")
        paths[split] = path
    with open(paths["train"]) as fh:
        train = parse_ts_file(fh.read(), name=name, split="train")
    with open(paths["test"]) as fh:
        test = parse_ts_file(fh.read(), name=name, split="test")
    return SplitPair(train=train, test=test)


def _synth_rows(kind: str, n: int, m: int, rng: np.random.Generator):
    t = np.arange(m) / m
    labels = np.array(["a", "b"])[np.arange(n) % 2]
    rows = np.empty((n, m))
    if kind == "freq-two-class":
        # random phase keeps individual raw points uninformative
        freqs = np.where(labels == "a", 3.0, 6.0)
        for i in range(n):
            phase = rng.uniform(0.0, 2 * np.pi)
            rows[i] = np.sin(2 * np.pi * freqs[i] * t + phase)
        rows += rng.normal(0.0, 0.3, size=rows.shape)
    elif kind == "bump-location":
        # shared sinusoidal background makes the bump position visible to
        # global pooling statistics, not just to positional features
        background = np.sin(2 * np.pi * t)
        width = max(m / 16.0, 2.0)
        for i in range(n):
            lo, hi = (0.15, 0.35) if labels[i] == "a" else (0.65, 0.85)
            center = rng.uniform(lo * m, hi * m)
            bump = 3.0 * np.exp(-0.5 * ((np.arange(m) - center) / width) ** 2)
            rows[i] = background + bump
        rows += rng.normal(0.0, 0.3, size=rows.shape)
    elif kind == "noise-only":
        rows = rng.normal(0.0, 1.0, size=(n, m))
    else:
        raise InvalidSize(f"unknown synthetic kind {kind!r}")
    return rows, labels


def synthesize(kind: str, n: int, m: int, seed: int) -> SplitPair:
    """Generate a deterministic synthetic train/test pair, n series per split.

    Labels are balanced (n/2 per class).  Pure function of
    ``(kind, n, m, seed)``.
    """
    if kind not in SYNTH_KINDS:
        raise InvalidSize(f"unknown synthetic kind {kind!r}; choose from {SYNTH_KINDS}")
    if n < 2 or n % 2 != 0:
        raise InvalidSize(f"n must be even and >= 2, got {n}")
    if m < 16:
        raise InvalidSize(f"m must be >= 16, got {m}")
    rng = np.random.default_rng(seed)
    name = f"synth-{kind}-n{n}-m{m}-s{seed}"
    datasets = {}
    for split in ("train", "test"):
        rows, labels = _synth_rows(kind, n, m, rng)
        datasets[split] = TimeSeriesDataset(
            name=name, series=rows, labels=tuple(labels), split=split
        )
    return SplitPair(train=datasets["train"], test=datasets["test"])
