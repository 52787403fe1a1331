"""Time-series feature-engineering and classification benchmark toolkit."""

__version__ = "0.1.0"

from .dataset import SplitPair, TimeSeriesDataset, parse_csv, parse_ts_file, synthesize
from .featurebank import FEATURE_NAMES, compute_bank
from .features import FeatureMatrix
from .intervals import sample_intervals, interval_bank_transform, interval_summary_transform
from .kernels import (
    dilated_convolve,
    first_difference,
    minirocket_transform,
    multirocket_transform,
    pool,
    rocket_transform,
)
from .classifiers import Standardizer, accuracy, predict, train_classifier
from .pipeline import ExtractorConfig, PipelineResult, apply_strategy, extract, greedy_stack, preset, run
from .signature import chen_concat, dyadic_windows, segment_signature, signature, signature_transform
from .stats import (
    ResultsTable,
    average_ranks,
    cd_diagram,
    friedman_test,
    holm_adjust,
    nemenyi_cd,
    pairwise_matrix,
    stratify_by_length,
    wilcoxon_signed_rank,
)

__all__ = [name for name in dir() if not name.startswith("_")]
