"""Walk through the feature extractors on a small synthetic task.

Two classes of noisy sine waves that differ only in frequency; phase is
randomized per series, so the raw sample values carry almost no aligned
signal and a 1-NN on raw values does poorly. Each extractor turns a series
into a fixed-width row, and a ridge classifier on those rows separates the
classes easily.

Run:  python3 demos/extractor_tour.py
"""

import numpy as np

from tsfeatbench.dataset import synthesize
from tsfeatbench.pipeline import EXTRACTOR_KINDS, ExtractorConfig, run

pair = synthesize("freq-two-class", n=40, m=128, seed=1)
print(f"dataset: {pair.train.name}")
print(f"train {pair.train.n} x {pair.train.m}, classes {pair.train.classes}")
print()

baseline = run(pair, [], "ridge", "RAW", seed=0)
print(f"{'RAW (series values)':28s} F={baseline.feature_count:5d}  "
      f"acc={baseline.accuracy:.3f}")

for kind in EXTRACTOR_KINDS:
    config = ExtractorConfig(kind=kind, seed=0, feature_cap=2000)
    result = run(pair, [config], "ridge", "FTS", seed=0)
    secs = result.extract_train_time + result.extract_test_time
    print(f"{kind:28s} F={result.feature_count:5d}  "
          f"acc={result.accuracy:.3f}  extract={secs:.2f}s")

print()
print("RAW_PLUS_FTS appends the raw values after the extracted columns:")
config = ExtractorConfig(kind="minirocket", seed=0)
both = run(pair, [config], "ridge", "RAW_PLUS_FTS", seed=0)
print(f"minirocket + raw             F={both.feature_count:5d}  "
      f"acc={both.accuracy:.3f}")
