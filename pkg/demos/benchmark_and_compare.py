"""Run a small benchmark grid end to end and compare methods statistically.

Builds a manifest over three synthetic datasets, runs the grid with resume
support, then renders a critical-difference diagram and a pairwise
significance matrix from the results table. Everything lands in
demo_output/ next to the repository root.

Run:  python3 demos/benchmark_and_compare.py
"""

import json
import os

from tsfeatbench.cli import main

OUT = "demo_output"
os.makedirs(OUT, exist_ok=True)

manifest = {
    "datasets": [
        {"synth": {"kind": "freq-two-class", "n": 24, "m": 64, "seed": 1}},
        {"synth": {"kind": "bump-location", "n": 24, "m": 64, "seed": 2}},
        {"synth": {"kind": "freq-two-class", "n": 24, "m": 96, "seed": 3}},
        {"synth": {"kind": "bump-location", "n": 24, "m": 96, "seed": 4}},
    ],
    "extractors": ["minirocket", "intervals_summary",
                   {"preset": "Features_python-analog"}],
    "classifiers": ["ridge"],
    "strategies": ["RAW", "FTS"],
    "output_dir": OUT,
    "seed": 0,
}
manifest_path = os.path.join(OUT, "manifest.json")
with open(manifest_path, "w") as fh:
    json.dump(manifest, fh, indent=2)

print("== benchmark (rerun this script: completed cells are resumed) ==")
assert main(["benchmark", manifest_path]) == 0

print()
print("== compare ==")
assert main(["compare", os.path.join(OUT, "results.tsv"),
             "--output-dir", OUT]) == 0

print()
print("== report ==")
assert main(["report", os.path.join(OUT, "results.jsonl"),
             "--output", os.path.join(OUT, "report.json")]) == 0

print()
print(f"open {OUT}/cd_diagram.svg and {OUT}/pairwise_matrix.svg in a browser")
with open(os.path.join(OUT, "ranks.tsv")) as fh:
    print(fh.read())
