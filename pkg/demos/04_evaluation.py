"""Scoring extracted primaries against a designer-coloring baseline.

Builds a tiny baseline dataset in memory, derives the per-concept ground
truth (leader-clustered designer dominants, centroid of the largest
cluster), then scores two method conditions and prints the aggregates.
"""

import json
import tempfile
from pathlib import Path

from gencolor.colorspace import ColorRGB8
from gencolor.evaluation import BaselineDataset, evaluate, ground_truth_primary

# Three designers colored "strawberry"; two agree on a red, one went green.
records = [
    {"concept": "strawberry", "designer": "d1", "category": "Fruit",
     "colors": [{"hex": "#c62828", "area": 0.7}, {"hex": "#2e7d32", "area": 0.3}]},
    {"concept": "strawberry", "designer": "d2", "category": "Fruit",
     "colors": [{"hex": "#d32f2f", "area": 0.8}, {"hex": "#ffffff", "area": 0.2}]},
    {"concept": "strawberry", "designer": "d3", "category": "Fruit",
     "colors": [{"hex": "#43a047", "area": 0.6}, {"hex": "#b71c1c", "area": 0.4}]},
    {"concept": "ocean", "designer": "d1", "category": "Environment",
     "colors": [{"hex": "#1565c0", "area": 1.0}]},
    {"concept": "ocean", "designer": "d2", "category": "Environment",
     "colors": [{"hex": "#1976d2", "area": 0.9}, {"hex": "#eeeeee", "area": 0.1}]},
]

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "baseline.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records))
    baseline = BaselineDataset.load_jsonl(path)

print("ground truths:")
for concept, colorings in baseline.colorings.items():
    gt = ground_truth_primary(colorings)
    print(f"  {concept}: {gt.hex()} from {len(colorings)} designers")

# Method outputs keyed by (concept, condition). "Q" and "G" here stand in
# for two extraction configurations being compared.
method = {
    ("strawberry", "Q"): ColorRGB8.from_hex("#c94040"),
    ("strawberry", "G"): ColorRGB8.from_hex("#e57373"),
    ("ocean", "Q"): ColorRGB8.from_hex("#1e6fc4"),
    ("ocean", "G"): ColorRGB8.from_hex("#64b5f6"),
    ("volcano", "Q"): ColorRGB8.from_hex("#bf360c"),  # no baseline data
}

report = evaluate(method, baseline)
for row in report.rows:
    print(f"  {row.concept_id}/{row.condition}: dE00 {row.distance:.2f} "
          f"(method {row.method_primary.hex()} vs truth {row.ground_truth.hex()})")
print("missing from baseline:", report.missing)
print()
print("per condition x category (mean, sample sd):")
for (cond, cat), (mean, sd) in sorted(report.aggregates.items()):
    print(f"  {cond:>2} {cat:<12} mean {mean:6.2f}  sd {sd:6.2f}")

# Reports serialize to JSON and CSV for downstream tooling.
print()
print(report.to_csv().strip())
