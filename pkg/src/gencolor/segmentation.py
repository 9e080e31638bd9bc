"""Concept-relevant masking: detector -> NMS -> box-prompted masks -> union.

The detector and masker are external backends (HTTP or fixture); this module
owns the orchestration, the greedy NMS, and the trivial whole-image fallback.
"""

from __future__ import annotations

import base64
import io
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from gencolor.generation import BackendUnavailableError, ImageSample

log = logging.getLogger(__name__)

DEFAULT_BOX_THRESHOLD = 0.35
DEFAULT_NMS_IOU = 0.5


class NoDetectionsError(RuntimeError):
    pass


@dataclass(frozen=True)
class DetectionBox:
    x0: float
    y0: float
    x1: float
    y1: float
    confidence: float
    phrase: str = ""

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("box must have positive extent")
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError("confidence must lie in [0,1]")

    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


@dataclass
class SegmentMask:
    bits: np.ndarray  # (H, W) bool

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.ndim != 2:
            raise ValueError("mask must be 2-D")

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def coverage(self) -> float:
        return float(np.count_nonzero(self.bits)) / self.bits.size

    def union(self, other: "SegmentMask") -> "SegmentMask":
        if self.bits.shape != other.bits.shape:
            raise ValueError("mask shapes differ")
        return SegmentMask(self.bits | other.bits)


def iou(a: DetectionBox, b: DetectionBox) -> float:
    ix0 = max(a.x0, b.x0)
    iy0 = max(a.y0, b.y0)
    ix1 = min(a.x1, b.x1)
    iy1 = min(a.y1, b.y1)
    if ix0 >= ix1 or iy0 >= iy1:
        return 0.0
    inter = (ix1 - ix0) * (iy1 - iy0)
    return inter / (a.area() + b.area() - inter)


def nms(boxes: list[DetectionBox], iou_threshold: float = DEFAULT_NMS_IOU) -> list[DetectionBox]:
    """Greedy non-maximum suppression.

    Boxes are visited in (confidence desc, original index asc) order; a box
    is kept iff its IoU with every previously kept box is below the
    threshold. Output is sorted by confidence descending.
    """
    if not (0.0 < iou_threshold <= 1.0):
        raise ValueError("iou_threshold must lie in (0,1]")
    order = sorted(range(len(boxes)), key=lambda i: (-boxes[i].confidence, i))
    kept: list[DetectionBox] = []
    for i in order:
        if all(iou(boxes[i], k) < iou_threshold for k in kept):
            kept.append(boxes[i])
    return kept


@dataclass(frozen=True)
class SegmentationParams:
    box_threshold: float = DEFAULT_BOX_THRESHOLD
    iou_threshold: float = DEFAULT_NMS_IOU


def segment_concept(
    image: ImageSample,
    concept_text: str,
    detector,
    masker,
    params: SegmentationParams = SegmentationParams(),
) -> SegmentMask:
    """Detect concept regions, suppress overlaps, and union box-prompted masks."""
    if not concept_text.strip():
        raise ValueError("concept_text must be non-empty")
    boxes = detector.detect(image, concept_text)
    boxes = [b for b in boxes if b.confidence >= params.box_threshold]
    boxes = nms(boxes, params.iou_threshold)
    if not boxes:
        raise NoDetectionsError(f"no detections for {concept_text!r}")
    h, w = image.pixels.shape[:2]
    merged = np.zeros((h, w), dtype=bool)
    for box in boxes:
        mask = masker.mask(image, box)
        merged |= mask.bits
    return SegmentMask(merged)


def whole_image_mask(image: ImageSample) -> SegmentMask:
    h, w = image.pixels.shape[:2]
    return SegmentMask(np.ones((h, w), dtype=bool))


def load_fixture_mask(corpus_dir: str | Path, identifier: str) -> SegmentMask:
    """Read `<corpus>/<id>.mask.png`; any nonzero pixel is set."""
    path = Path(corpus_dir) / f"{identifier}.mask.png"
    img = Image.open(path).convert("L")
    return SegmentMask(np.asarray(img) > 0)


def rle_encode(bits: np.ndarray) -> list[int]:
    """Row-major run lengths, alternating and starting with a run of zeros."""
    flat = np.asarray(bits, dtype=np.uint8).ravel()
    if flat.size == 0:
        return []
    change = np.flatnonzero(np.diff(flat)) + 1
    bounds = np.concatenate(([0], change, [flat.size]))
    runs = np.diff(bounds).tolist()
    if flat[0] == 1:
        runs = [0] + runs
    return [int(r) for r in runs]


def rle_decode(runs: list[int], height: int, width: int) -> np.ndarray:
    flat = np.zeros(height * width, dtype=bool)
    pos = 0
    value = False
    for run in runs:
        if value:
            flat[pos : pos + run] = True
        pos += run
        value = not value
    if pos != flat.size:
        raise ValueError("run lengths do not cover the mask")
    return flat.reshape(height, width)


def _image_b64(image: ImageSample) -> str:
    buf = io.BytesIO()
    Image.fromarray(image.pixels).save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


class HttpDetector:
    """Open-set detector client: (image, text) -> scored boxes."""

    def __init__(self, url: str, timeout: float = 60.0):
        import httpx

        self.url = url
        self._client = httpx.Client(timeout=timeout)

    def detect(self, image: ImageSample, text: str) -> list[DetectionBox]:
        try:
            resp = self._client.post(
                self.url, json={"image": _image_b64(image), "text": text}
            )
            resp.raise_for_status()
        except Exception as exc:  # noqa: BLE001
            raise BackendUnavailableError(f"detector unreachable: {exc}") from exc
        return [
            DetectionBox(
                x0=d["box"][0], y0=d["box"][1], x1=d["box"][2], y1=d["box"][3],
                confidence=d["confidence"], phrase=d.get("phrase", ""),
            )
            for d in resp.json()["detections"]
        ]


class HttpMasker:
    """Promptable mask client: (image, box) -> run-length-encoded bitmask."""

    def __init__(self, url: str, timeout: float = 60.0):
        import httpx

        self.url = url
        self._client = httpx.Client(timeout=timeout)

    def mask(self, image: ImageSample, box: DetectionBox) -> SegmentMask:
        try:
            resp = self._client.post(
                self.url,
                json={
                    "image": _image_b64(image),
                    "box": [box.x0, box.y0, box.x1, box.y1],
                },
            )
            resp.raise_for_status()
        except Exception as exc:  # noqa: BLE001
            raise BackendUnavailableError(f"masker unreachable: {exc}") from exc
        data = resp.json()
        return SegmentMask(rle_decode(data["rle"], data["height"], data["width"]))
