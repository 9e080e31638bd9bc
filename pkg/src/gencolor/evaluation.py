"""Evaluation against a designer-coloring baseline.

Ingests designer colorings (JSON lines), derives a per-concept ground-truth
primary color, and scores method outputs by CIEDE2000 distance, aggregated
per experiment condition and concept category.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from gencolor.association import GROUPING_THRESHOLD
from gencolor.colorspace import (
    ColorRGB8,
    ciede2000_array,
    lab_to_srgb_array,
    srgb_to_lab_array,
)

log = logging.getLogger(__name__)

CONDITIONS = ("Q", "G", "QC", "GC")
CATEGORIES = ("Fruit", "Vegetable", "Environment", "Animal", "Context")


class EmptyConceptError(ValueError):
    pass


@dataclass
class DesignerColoring:
    concept_id: str
    designer_id: str
    colors: list[tuple[ColorRGB8, float]]  # (color, area fraction)

    def __post_init__(self):
        if not self.colors:
            raise ValueError("a coloring needs at least one color")
        total = sum(a for _, a in self.colors)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"area fractions sum to {total}, expected 1")

    def dominant(self) -> ColorRGB8:
        """Largest-area color; ties go to the first listed."""
        best = max(range(len(self.colors)), key=lambda i: self.colors[i][1])
        first = next(
            i for i in range(len(self.colors))
            if self.colors[i][1] == self.colors[best][1]
        )
        return self.colors[first][0]


@dataclass
class BaselineDataset:
    colorings: dict[str, list[DesignerColoring]] = field(default_factory=dict)
    categories: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load_jsonl(cls, path: str | Path) -> "BaselineDataset":
        """One DesignerColoring per line:
        {"concept": ..., "designer": ..., "category": ...,
         "colors": [{"hex": "#rrggbb", "area": 0.6}, ...]}
        """
        dataset = cls()
        for raw in Path(path).read_text().splitlines():
            line = raw.strip()
            if not line:
                continue
            rec = json.loads(line)
            coloring = DesignerColoring(
                concept_id=rec["concept"],
                designer_id=rec["designer"],
                colors=[
                    (ColorRGB8.from_hex(c["hex"]), float(c["area"]))
                    for c in rec["colors"]
                ],
            )
            dataset.colorings.setdefault(coloring.concept_id, []).append(coloring)
            if "category" in rec:
                dataset.categories[coloring.concept_id] = rec["category"]
        return dataset


def ground_truth_primary(colorings: list[DesignerColoring]) -> ColorRGB8:
    """Collapse one concept's designer colorings to a reference primary.

    Each designer contributes their dominant color; dominants are
    leader-clustered at the pipeline's grouping threshold and the Lab
    centroid of the largest cluster is the ground truth.
    """
    if not colorings:
        raise EmptyConceptError("no colorings for concept")
    dominants = [c.dominant() for c in colorings]
    labs = srgb_to_lab_array(np.array([d.as_array() for d in dominants]))
    clusters: list[list[int]] = []
    leaders: list[np.ndarray] = []
    for i, lab in enumerate(labs):
        for j, leader in enumerate(leaders):
            if float(ciede2000_array(lab, leader)) < GROUPING_THRESHOLD:
                clusters[j].append(i)
                break
        else:
            leaders.append(lab)
            clusters.append([i])
    order = sorted(
        range(len(clusters)),
        key=lambda j: (-len(clusters[j]), tuple(leaders[j])),
    )
    best = clusters[order[0]]
    centroid = labs[best].mean(axis=0)
    rgb = lab_to_srgb_array(centroid)
    return ColorRGB8(int(rgb[0]), int(rgb[1]), int(rgb[2]))


@dataclass
class ConceptResult:
    concept_id: str
    condition: str
    category: str
    method_primary: ColorRGB8
    ground_truth: ColorRGB8
    distance: float


@dataclass
class EvaluationReport:
    rows: list[ConceptResult]
    aggregates: dict[tuple[str, str], tuple[float, float]]  # (condition, category) -> (mean, sd)
    missing: list[tuple[str, str]]  # (concept, condition) without baseline data

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": [
                    {
                        "concept": r.concept_id,
                        "condition": r.condition,
                        "category": r.category,
                        "method_primary": r.method_primary.hex(),
                        "ground_truth": r.ground_truth.hex(),
                        "delta_e": round(r.distance, 9),
                    }
                    for r in self.rows
                ],
                "aggregates": [
                    {
                        "condition": cond,
                        "category": cat,
                        "mean": round(m, 9),
                        "sd": round(s, 9),
                    }
                    for (cond, cat), (m, s) in sorted(self.aggregates.items())
                ],
                "missing": [
                    {"concept": c, "condition": cond} for c, cond in self.missing
                ],
            },
            sort_keys=True,
            indent=2,
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["concept", "condition", "category", "method_primary", "ground_truth", "delta_e"]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.concept_id,
                    r.condition,
                    r.category,
                    r.method_primary.hex(),
                    r.ground_truth.hex(),
                    f"{r.distance:.9f}",
                ]
            )
        return buf.getvalue()


def _mean_sd(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def evaluate(
    method_primaries: dict[tuple[str, str], ColorRGB8],
    baseline: BaselineDataset,
) -> EvaluationReport:
    """Score method primaries, keyed by (concept, condition), against the
    baseline. Concepts absent from the baseline are listed, not fatal."""
    rows: list[ConceptResult] = []
    missing: list[tuple[str, str]] = []
    ground_truths: dict[str, ColorRGB8] = {}
    for (concept, condition) in sorted(method_primaries):
        if concept not in baseline.colorings:
            log.warning("no baseline colorings for concept %r", concept)
            missing.append((concept, condition))
            continue
        if concept not in ground_truths:
            ground_truths[concept] = ground_truth_primary(baseline.colorings[concept])
        gt = ground_truths[concept]
        primary = method_primaries[(concept, condition)]
        d = float(
            ciede2000_array(
                srgb_to_lab_array(primary.as_array()),
                srgb_to_lab_array(gt.as_array()),
            )
        )
        rows.append(
            ConceptResult(
                concept_id=concept,
                condition=condition,
                category=baseline.categories.get(concept, "Uncategorized"),
                method_primary=primary,
                ground_truth=gt,
                distance=d,
            )
        )
    aggregates: dict[tuple[str, str], tuple[float, float]] = {}
    keys = sorted({(r.condition, r.category) for r in rows})
    for cond, cat in keys:
        values = [r.distance for r in rows if r.condition == cond and r.category == cat]
        aggregates[(cond, cat)] = _mean_sd(values)
    return EvaluationReport(rows=rows, aggregates=aggregates, missing=missing)
