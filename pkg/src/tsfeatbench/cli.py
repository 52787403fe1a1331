"""Batch command-line front end.

Subcommands: ``synth`` (generate fixture datasets), ``extract`` (feature
files), ``benchmark`` (run a manifest grid with resume), ``compare``
(CD diagram + pairwise matrix from a results table) and ``report``
(aggregate benchmark records).

Exit codes: 0 success, 2 usage errors, 3 data errors, 4 runtime errors.
All randomness flows from the manifest / ``--seed`` master seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .dataset import (
    DATA_DIR_ENV,
    SYNTH_KINDS,
    SplitPair,
    load_split_pair,
    serialize_ts,
    synthesize,
)
from .errors import TsFeatBenchError, UnknownPreset
from .pipeline import (
    EXTRACTOR_KINDS,
    STRATEGIES,
    ExtractorConfig,
    PipelineResult,
    extract,
    preset,
    run,
    stack_features,
)
from .stats import ResultsTable, cd_diagram, pairwise_matrix, pairwise_matrix_svg
from .stats import average_ranks, stratify_by_length

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


class UsageError(Exception):
    pass


# --- manifest handling -------------------------------------------------------

def load_manifest(path: str) -> dict:
    try:
        with open(path) as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"manifest not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"manifest is not valid JSON: {exc}") from None
    for key in ("datasets", "output_dir"):
        if key not in manifest:
            raise UsageError(f"manifest is missing the {key!r} key")
    manifest.setdefault("seed", 0)
    manifest.setdefault("threads", 1)
    manifest.setdefault("extractors", [])
    manifest.setdefault("classifiers", ["random_forest"])
    manifest.setdefault("strategies", ["FTS"])
    return manifest


def _resolve_dataset(entry, data_dir, master_seed: int) -> tuple:
    """Returns (name, SplitPair). Entry is a name string or a synth spec."""
    if isinstance(entry, str):
        pair = load_split_pair(data_dir, entry)
        return entry, pair
    if isinstance(entry, dict) and "synth" in entry:
        spec = entry["synth"]
        pair = synthesize(spec["kind"], spec["n"], spec["m"],
                          spec.get("seed", master_seed))
        return pair.train.name, pair
    raise UsageError(f"bad dataset entry: {entry!r}")


def _resolve_extractors(entries, master_seed: int):
    """Each entry becomes a named list of configs (a unit of the grid)."""
    units = []
    for i, entry in enumerate(entries):
        if isinstance(entry, str):
            entry = {"kind": entry}
        if "preset" in entry:
            configs = preset(entry["preset"], seed=entry.get("seed", master_seed))
            units.append((entry["preset"], configs))
        elif "kind" in entry:
            if entry["kind"] not in EXTRACTOR_KINDS:
                raise UsageError(f"unknown extractor {entry['kind']!r}")
            config = ExtractorConfig(
                kind=entry["kind"],
                params=entry.get("params", {}),
                seed=entry.get("seed", master_seed),
                feature_cap=entry.get("feature_cap", 1000),
            )
            units.append((entry["kind"], [config]))
        else:
            raise UsageError(f"bad extractor entry: {entry!r}")
    return units


def _config_payload(config: ExtractorConfig) -> dict:
    return {"kind": config.kind, "params": config.params,
            "seed": config.seed, "feature_cap": config.feature_cap}


def cell_key(dataset: str, configs, classifier: str, strategy: str,
             seed: int) -> str:
    payload = {
        "dataset": dataset,
        "configs": [_config_payload(c) for c in configs] if strategy != "RAW" else [],
        "classifier": classifier,
        "strategy": strategy,
        "seed": seed,
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:24]


# --- subcommands -------------------------------------------------------------

def cmd_synth(args) -> int:
    pair = synthesize(args.kind, args.n, args.m, args.seed)
    os.makedirs(args.output_dir, exist_ok=True)
    name = args.name or pair.train.name
    for split, ds in (("TRAIN", pair.train), ("TEST", pair.test)):
        path = os.path.join(args.output_dir, f"{name}_{split}.ts")
        with open(path, "w") as fh:
            fh.write(serialize_ts(ds))
        print(f"wrote {path}")
    return EXIT_OK


def cmd_extract(args) -> int:
    manifest = load_manifest(args.manifest)
    data_dir = args.data_dir or manifest.get("data_dir")
    out_dir = os.path.join(manifest["output_dir"], "features")
    os.makedirs(out_dir, exist_ok=True)
    seed = manifest["seed"]
    units = _resolve_extractors(manifest["extractors"], seed)
    if not units:
        raise UsageError("manifest lists no extractors")
    for entry in manifest["datasets"]:
        name, pair = _resolve_dataset(entry, data_dir, seed)
        for unit_name, configs in units:
            parts = [extract(c, pair) for c in configs]
            features = stack_features(parts)
            for split, fm in (("TRAIN", features.train), ("TEST", features.test)):
                path = os.path.join(out_dir, f"{name}__{unit_name}_{split}.csv")
                with open(path, "w") as fh:
                    fh.write(fm.to_csv())
                print(f"wrote {path} ({fm.width} columns)")
    return EXIT_OK


def _run_cell(pair: SplitPair, configs, classifier, strategy, seed):
    return run(pair, configs, classifier, strategy, seed=seed)


def cmd_benchmark(args) -> int:
    manifest = load_manifest(args.manifest)
    data_dir = args.data_dir or manifest.get("data_dir")
    out_dir = manifest["output_dir"]
    cells_dir = os.path.join(out_dir, "cells")
    os.makedirs(cells_dir, exist_ok=True)
    seed = args.seed if args.seed is not None else manifest["seed"]
    threads = args.threads if args.threads is not None else manifest["threads"]

    units = _resolve_extractors(manifest["extractors"], seed)
    strategies = manifest["strategies"]
    for strategy in strategies:
        if strategy not in STRATEGIES:
            raise UsageError(f"unknown strategy {strategy!r}")
    if not units and any(s != "RAW" for s in strategies):
        raise UsageError("manifest lists no extractors")

    datasets = [_resolve_dataset(e, data_dir, seed) for e in manifest["datasets"]]

    jobs = []
    seen = set()
    for name, pair in datasets:
        for classifier in manifest["classifiers"]:
            for strategy in strategies:
                grid_units = units if strategy != "RAW" else [("raw", [])]
                for unit_name, configs in grid_units:
                    key = cell_key(name, configs, classifier, strategy, seed)
                    if key in seen:
                        continue
                    seen.add(key)
                    jobs.append((key, name, pair, unit_name, configs,
                                 classifier, strategy))

    def execute(job):
        key, name, pair, unit_name, configs, classifier, strategy = job
        path = os.path.join(cells_dir, f"{key}.json")
        if os.path.exists(path):
            with open(path) as fh:
                return PipelineResult.from_json(fh.read()), unit_name, True
        try:
            result = _run_cell(pair, configs, classifier, strategy, seed)
        except TsFeatBenchError as exc:
            with open(os.path.join(cells_dir, f"{key}.error"), "w") as fh:
                fh.write(f"{type(exc).__name__}: {exc}\n")
            return None, unit_name, False
        with open(path, "w") as fh:
            fh.write(result.to_json() + "\n")
        return result, unit_name, False

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(execute, jobs))
    else:
        outcomes = [execute(job) for job in jobs]

    results = []
    for (key, name, pair, unit_name, configs, classifier, strategy), \
            (result, _, resumed) in zip(jobs, outcomes):
        if result is None:
            print(f"cell {key} failed (recorded, skipped)", file=sys.stderr)
            continue
        method = f"{unit_name}|{classifier}|{strategy}"
        results.append((name, pair.train.m, method, result))
        status = "resumed" if resumed else "done"
        print(f"[{status}] {name} {method} acc={result.accuracy:.4f}")

    if results:
        _write_results(out_dir, results)
    return EXIT_OK


def _write_results(out_dir: str, results) -> None:
    with open(os.path.join(out_dir, "results.jsonl"), "w") as fh:
        for _, _, _, result in results:
            fh.write(result.to_json() + "\n")
    datasets, lengths = [], {}
    methods = []
    cells = {}
    for name, m, method, result in results:
        if name not in lengths:
            datasets.append(name)
            lengths[name] = m
        if method not in methods:
            methods.append(method)
        cells[(name, method)] = result.accuracy
    complete = [d for d in datasets
                if all((d, meth) in cells for meth in methods)]
    if len(methods) >= 2 and complete:
        table = ResultsTable(
            datasets=tuple(complete),
            methods=tuple(methods),
            accuracies=np.array([[cells[(d, meth)] for meth in methods]
                                 for d in complete]),
            lengths=tuple(lengths[d] for d in complete),
        )
        with open(os.path.join(out_dir, "results.tsv"), "w") as fh:
            fh.write(table.to_tsv())


def _write_comparison(out_dir: str, table: ResultsTable, alpha: float,
                      suffix: str = "") -> None:
    model, svg = cd_diagram(table, alpha)
    with open(os.path.join(out_dir, f"cd_diagram{suffix}.svg"), "w") as fh:
        fh.write(svg)
    matrix = pairwise_matrix(table, alpha)
    with open(os.path.join(out_dir, f"pairwise_matrix{suffix}.svg"), "w") as fh:
        fh.write(pairwise_matrix_svg(matrix))
    ranks = average_ranks(table)
    means = table.accuracies.mean(axis=0)
    with open(os.path.join(out_dir, f"ranks{suffix}.tsv"), "w") as fh:
        fh.write("method\tavg_rank\tmean_accuracy\n")
        for i in np.argsort(ranks, kind="stable"):
            fh.write(f"{table.methods[i]}\t{ranks[i]:.4f}\t{means[i]:.3f}\n")


def cmd_compare(args) -> int:
    with open(args.results) as fh:
        table = ResultsTable.from_tsv(fh.read())
    os.makedirs(args.output_dir, exist_ok=True)
    _write_comparison(args.output_dir, table, args.alpha)
    print(f"wrote CD diagram and pairwise matrix to {args.output_dir}")
    if args.stratify:
        strata = stratify_by_length(table)
        for sub, suffix in zip(strata, ("_lt315", "_gt315", "_gt720")):
            if sub.n_datasets == 0:
                print(f"stratum {suffix[1:]}: empty, skipped")
                continue
            _write_comparison(args.output_dir, sub, args.alpha, suffix)
            print(f"wrote stratum {suffix[1:]} diagrams")
    return EXIT_OK


def cmd_report(args) -> int:
    records = []
    with open(args.results) as fh:
        for line in fh:
            if line.strip():
                records.append(PipelineResult.from_json(line))
    if not records:
        raise UsageError(f"no records in {args.results}")
    by_method = {}
    for r in records:
        method = f"{'+'.join(r.extractors) or 'raw'}|{r.classifier}|{r.strategy}"
        by_method.setdefault(method, []).append(r)
    summary = {}
    for method, rs in sorted(by_method.items()):
        summary[method] = {
            "runs": len(rs),
            "mean_accuracy": float(np.mean([r.accuracy for r in rs])),
            "mean_extract_train_s": float(np.mean([r.extract_train_time for r in rs])),
            "mean_extract_test_s": float(np.mean([r.extract_test_time for r in rs])),
            "mean_fit_s": float(np.mean([r.fit_time for r in rs])),
            "mean_feature_count": float(np.mean([r.feature_count for r in rs])),
        }
    text = json.dumps(summary, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsfeatbench",
        description="Time-series feature engineering benchmark toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset as .ts files")
    p.add_argument("--kind", choices=SYNTH_KINDS, required=True)
    p.add_argument("--n", type=int, required=True, help="series per split (even)")
    p.add_argument("--m", type=int, required=True, help="series length (>= 16)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default=None)
    p.add_argument("--output-dir", default=".")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="write feature files for a manifest")
    p.add_argument("manifest")
    p.add_argument("--data-dir", default=os.environ.get(DATA_DIR_ENV))
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("benchmark", help="run a manifest benchmark grid")
    p.add_argument("manifest")
    p.add_argument("--data-dir", default=os.environ.get(DATA_DIR_ENV))
    p.add_argument("--seed", type=int, default=None,
                   help="override the manifest master seed")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: manifest value, 1)")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("compare", help="statistical comparison from a results table")
    p.add_argument("results", help="results.tsv produced by benchmark")
    p.add_argument("--alpha", type=float, default=0.05, choices=[0.05, 0.10])
    p.add_argument("--stratify", action="store_true",
                   help="also emit length-stratified diagrams")
    p.add_argument("--output-dir", default=".")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="aggregate benchmark records")
    p.add_argument("results", help="results.jsonl produced by benchmark")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TsFeatBenchError as exc:
        print(f"data error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
