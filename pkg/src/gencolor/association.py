"""Color association: masked images -> primary-accent palette compositions.

The procedure: quantize masked pixels into a 16x16x16 RGB histogram, take
the max-count bin's mean color as each image's dominant, group images whose
dominants fall within CIEDE2000 distance 12 of a group leader, keep the top
five groups with at least three members, derive each group's primary as the
count-weighted Lab centroid of the bin colors within distance 7 of the
group dominant, and extract five accent colors by weighted k-means over all
images' bin colors.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from gencolor.colorspace import (
    ColorRGB8,
    ciede2000_array,
    lab_to_srgb_array,
    srgb_to_lab_array,
)
from gencolor.generation import ImageSample
from gencolor.segmentation import SegmentMask

BIN_RESOLUTION = 16  # bins per RGB channel
GROUPING_THRESHOLD = 12.0  # CIEDE2000, image dominant vs group leader
TOP_COLOR_BAND = 7.0  # CIEDE2000, bin color vs group dominant
ACCENT_K = 5
MAX_GROUPS = 5
MIN_GROUP_SIZE = 3

_N_BINS = BIN_RESOLUTION**3

KMEANS_TOLERANCE = 0.1  # max centroid movement (Lab Euclidean) to stop
KMEANS_MAX_ITER = 100


class EmptyMaskError(ValueError):
    pass


class EmptyHistogramError(ValueError):
    pass


class NoValidGroupsError(RuntimeError):
    pass


@dataclass
class BinHistogram:
    """Counts and running color sums over the quantized RGB space."""

    counts: np.ndarray  # (4096,) int64, flat index r*256 + g*16 + b
    sums: np.ndarray  # (4096, 3) float64, per-bin sum of member pixel RGB

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        self.sums = np.asarray(self.sums, dtype=np.float64)
        if self.counts.shape != (_N_BINS,) or self.sums.shape != (_N_BINS, 3):
            raise ValueError("histogram arrays have wrong shape")

    @classmethod
    def empty(cls) -> "BinHistogram":
        return cls(np.zeros(_N_BINS, dtype=np.int64), np.zeros((_N_BINS, 3)))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def add(self, other: "BinHistogram") -> "BinHistogram":
        return BinHistogram(self.counts + other.counts, self.sums + other.sums)

    def nonzero_bins(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(flat indices, representative RGB colors, counts) of occupied bins."""
        idx = np.flatnonzero(self.counts)
        counts = self.counts[idx]
        reps = self.sums[idx] / counts[:, None]
        return idx, reps, counts


def discretize(image: ImageSample, mask: SegmentMask, stride: int = 1) -> BinHistogram:
    """Bin the masked pixels of an image, sampling every `stride`-th row/column."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    pixels = image.pixels
    if mask.bits.shape != pixels.shape[:2]:
        raise ValueError("mask dimensions do not match image")
    sampled = pixels[::stride, ::stride].reshape(-1, 3)
    keep = mask.bits[::stride, ::stride].ravel()
    sampled = sampled[keep]
    if sampled.size == 0:
        raise EmptyMaskError("no masked pixel sampled")
    idx = (
        (sampled[:, 0].astype(np.int64) >> 4) * 256
        + (sampled[:, 1].astype(np.int64) >> 4) * 16
        + (sampled[:, 2].astype(np.int64) >> 4)
    )
    counts = np.bincount(idx, minlength=_N_BINS).astype(np.int64)
    sums = np.zeros((_N_BINS, 3))
    for c in range(3):
        sums[:, c] = np.bincount(idx, weights=sampled[:, c].astype(np.float64), minlength=_N_BINS)
    return BinHistogram(counts, sums)


def image_dominant(hist: BinHistogram) -> ColorRGB8:
    """Representative color of the max-count bin; ties go to the lowest
    (r, g, b) bin index."""
    if hist.total == 0:
        raise EmptyHistogramError("histogram is empty")
    best = int(np.argmax(hist.counts))  # argmax returns first max = lowest index
    mean = hist.sums[best] / hist.counts[best]
    r, g, b = np.clip(np.rint(mean), 0, 255).astype(int)
    return ColorRGB8(int(r), int(g), int(b))


@dataclass
class ImageColorSummary:
    image_id: str
    histogram: BinHistogram
    dominant: ColorRGB8


def summarize_image(image: ImageSample, mask: SegmentMask, stride: int = 1) -> ImageColorSummary:
    hist = discretize(image, mask, stride)
    return ImageColorSummary(image.identifier, hist, image_dominant(hist))


@dataclass
class ColorGroup:
    member_ids: list[str]
    leader_lab: np.ndarray  # (3,)
    histogram: BinHistogram
    group_dominant: ColorRGB8 | None = None
    top_colors: list[ColorRGB8] = field(default_factory=list)
    primary: ColorRGB8 | None = None


def group_images(
    summaries: list[ImageColorSummary],
    threshold: float = GROUPING_THRESHOLD,
    min_members: int = MIN_GROUP_SIZE,
    max_groups: int = MAX_GROUPS,
) -> list[ColorGroup]:
    """Leader clustering of images by dominant color.

    Images are visited in identifier order; each joins the first group whose
    leader dominant is within the CIEDE2000 threshold, else opens a new
    group. Groups are then ranked by size (ties by leader Lab lexicographic),
    filtered to at least `min_members`, and truncated to `max_groups`.
    """
    if not summaries:
        raise ValueError("summaries must be non-empty")
    ordered = sorted(summaries, key=lambda s: s.image_id)
    groups: list[ColorGroup] = []
    for summary in ordered:
        lab = srgb_to_lab_array(summary.dominant.as_array())
        placed = False
        for group in groups:
            if float(ciede2000_array(lab, group.leader_lab)) < threshold:
                group.member_ids.append(summary.image_id)
                group.histogram = group.histogram.add(summary.histogram)
                placed = True
                break
        if not placed:
            groups.append(
                ColorGroup(
                    member_ids=[summary.image_id],
                    leader_lab=lab,
                    histogram=BinHistogram(
                        summary.histogram.counts.copy(), summary.histogram.sums.copy()
                    ),
                )
            )
    groups = [g for g in groups if len(g.member_ids) >= min_members]
    groups.sort(key=lambda g: (-len(g.member_ids), tuple(g.leader_lab)))
    groups = groups[:max_groups]
    if not groups:
        raise NoValidGroupsError("no group reaches the minimum size")
    for group in groups:
        primary, top = group_primary(group)
        group.primary = primary
        group.top_colors = top
    return groups


def group_primary(group: ColorGroup) -> tuple[ColorRGB8, list[ColorRGB8]]:
    """Primary color of a group: count-weighted Lab centroid of the bin
    colors within TOP_COLOR_BAND of the group-level dominant."""
    dominant = image_dominant(group.histogram)
    group.group_dominant = dominant
    _, reps, counts = group.histogram.nonzero_bins()
    labs = srgb_to_lab_array(reps)
    dom_lab = srgb_to_lab_array(dominant.as_array())
    dists = ciede2000_array(labs, dom_lab)
    top = dists <= TOP_COLOR_BAND
    top_labs = labs[top]
    weights = counts[top].astype(np.float64)
    centroid = (top_labs * weights[:, None]).sum(axis=0) / weights.sum()
    rgb = lab_to_srgb_array(centroid)
    primary = ColorRGB8(int(rgb[0]), int(rgb[1]), int(rgb[2]))
    top_reps = np.clip(np.rint(reps[top]), 0, 255).astype(int)
    top_colors = [ColorRGB8(int(r), int(g), int(b)) for r, g, b in top_reps]
    return primary, top_colors


def _weighted_kmeans(
    points: np.ndarray,
    weights: np.ndarray,
    k: int,
    seed: int,
    tolerance: float = KMEANS_TOLERANCE,
    max_iter: int = KMEANS_MAX_ITER,
) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd's algorithm with k-means++ seeding over weighted points.

    Returns (centers (k,3), per-cluster weight sums). Deterministic given
    the seed. k is reduced to the number of points when necessary.
    """
    k = min(k, len(points))
    centers = kmeans_plusplus_seeds(points, weights, k, seed)
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = np.argmin(d2, axis=1)
        new_centers = centers.copy()
        for j in range(k):
            sel = assign == j
            if not sel.any():
                # revive an empty cluster at the worst-fit point
                worst = int(np.argmax(weights * d2[np.arange(len(points)), assign]))
                new_centers[j] = points[worst]
                continue
            w = weights[sel]
            new_centers[j] = (points[sel] * w[:, None]).sum(axis=0) / w.sum()
        movement = np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max()
        centers = new_centers
        if movement < tolerance:
            break
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    assign = np.argmin(d2, axis=1)
    cluster_weights = np.array([weights[assign == j].sum() for j in range(k)])
    return centers, cluster_weights


def kmeans_plusplus_seeds(
    points: np.ndarray, weights: np.ndarray, k: int, seed: int
) -> np.ndarray:
    """k-means++ D^2 seeding with a fixed RNG."""
    rng = np.random.default_rng(seed)
    n = len(points)
    p = weights / weights.sum()
    chosen = [int(rng.choice(n, p=p))]
    for _ in range(k - 1):
        d2 = np.min(
            ((points[:, None, :] - points[chosen][None, :, :]) ** 2).sum(axis=2), axis=1
        )
        score = weights * d2
        total = score.sum()
        if total <= 0:
            # all remaining mass sits on already-chosen points
            remaining = [i for i in range(n) if i not in chosen]
            chosen.append(remaining[0] if remaining else chosen[0])
            continue
        chosen.append(int(rng.choice(n, p=score / total)))
    return points[chosen].astype(np.float64).copy()


def accent_colors(
    summaries: list[ImageColorSummary], k: int = ACCENT_K, seed: int = 0
) -> list[tuple[ColorRGB8, float]]:
    """Accent palette: weighted k-means in Lab over all images' bin colors.

    Proportions are cluster weight fractions, sorted descending. Fewer than
    k clusters are returned when the input has fewer distinct colors.
    """
    if not summaries:
        raise ValueError("summaries must be non-empty")
    combined = BinHistogram.empty()
    for s in summaries:
        combined = combined.add(s.histogram)
    if combined.total == 0:
        raise EmptyHistogramError("all histograms are empty")
    _, reps, counts = combined.nonzero_bins()
    labs = srgb_to_lab_array(reps)
    centers, cluster_weights = _weighted_kmeans(
        labs, counts.astype(np.float64), k, seed
    )
    proportions = cluster_weights / cluster_weights.sum()
    rgbs = lab_to_srgb_array(centers)
    accents = [
        (ColorRGB8(int(c[0]), int(c[1]), int(c[2])), float(p))
        for c, p in zip(rgbs, proportions)
    ]
    accents.sort(key=lambda a: (-a[1], a[0].r, a[0].g, a[0].b))
    total = sum(p for _, p in accents)
    return [(c, p / total) for c, p in accents]


@dataclass(frozen=True)
class AssociationParams:
    grouping_threshold: float = GROUPING_THRESHOLD
    top_color_band: float = TOP_COLOR_BAND
    accent_k: int = ACCENT_K
    max_groups: int = MAX_GROUPS
    min_group_size: int = MIN_GROUP_SIZE
    stride: int = 1
    seed: int = 0

    def fingerprint(self) -> str:
        blob = json.dumps(
            {
                "bin_resolution": BIN_RESOLUTION,
                "grouping_threshold": self.grouping_threshold,
                "top_color_band": self.top_color_band,
                "accent_k": self.accent_k,
                "max_groups": self.max_groups,
                "min_group_size": self.min_group_size,
                "stride": self.stride,
                "seed": self.seed,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class PaletteComposition:
    primary: ColorRGB8
    accents: list[tuple[ColorRGB8, float]]
    group_rank: int
    group_size: int
    provenance: dict

    def to_dict(self) -> dict:
        return {
            "primary": self.primary.hex(),
            "accents": [
                {"color": c.hex(), "proportion": round(p, 9)} for c, p in self.accents
            ],
            "group_rank": self.group_rank,
            "group_size": self.group_size,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "PaletteComposition":
        return cls(
            primary=ColorRGB8.from_hex(data["primary"]),
            accents=[
                (ColorRGB8.from_hex(a["color"]), float(a["proportion"]))
                for a in data["accents"]
            ],
            group_rank=int(data["group_rank"]),
            group_size=int(data.get("group_size", 0)),
            provenance=dict(data.get("provenance", {})),
        )


def compose_palettes(
    summaries: list[ImageColorSummary],
    params: AssociationParams = AssociationParams(),
    corpus_id: str = "",
) -> list[PaletteComposition]:
    """Full association stage: one ranked palette per surviving color group.

    Accents are clustered once across all images and shared between groups;
    each group contributes its own primary.
    """
    groups = group_images(
        summaries,
        threshold=params.grouping_threshold,
        min_members=params.min_group_size,
        max_groups=params.max_groups,
    )
    accents = accent_colors(summaries, k=params.accent_k, seed=params.seed)
    provenance = {
        "corpus": corpus_id,
        "image_count": len(summaries),
        "params": params.fingerprint(),
    }
    return [
        PaletteComposition(
            primary=group.primary,
            accents=list(accents),
            group_rank=rank,
            group_size=len(group.member_ids),
            provenance=dict(provenance),
        )
        for rank, group in enumerate(groups)
    ]
