"""Image acquisition: remote text-to-image backends and local fixtures.

Neural inference never runs in process. Images come either from an HTTP
service speaking a minimal JSON contract, or from a directory of PNGs
(used for tests and for ingesting query-based corpora).
"""

from __future__ import annotations

import base64
import io
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from PIL import Image

from gencolor.prompts import ConceptSpec, GenerationRequest

log = logging.getLogger(__name__)

DEFAULT_MIN_SUCCESS_FRACTION = 0.8
DEFAULT_RETRIES = 2
AUTH_TOKEN_ENV = "GENCOLOR_API_TOKEN"


class BackendUnavailableError(RuntimeError):
    pass


class PartialCorpusError(RuntimeError):
    pass


class NoImagesFoundError(FileNotFoundError):
    pass


class ImageSource(str, Enum):
    GENERATED = "generated"
    QUERIED = "queried"
    FIXTURE = "fixture"


@dataclass
class ImageSample:
    identifier: str
    pixels: np.ndarray  # (H, W, 3) uint8
    source: ImageSource
    request_metadata: GenerationRequest | None = None

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError("pixels must be (H, W, 3)")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError("image must be at least 1x1")


@dataclass
class ImageCorpus:
    concept_spec: ConceptSpec
    samples: list[ImageSample] = field(default_factory=list)

    def __post_init__(self):
        self.samples.sort(key=lambda s: s.identifier)
        ids = [s.identifier for s in self.samples]
        if len(set(ids)) != len(ids):
            raise ValueError("sample identifiers must be unique within a corpus")


class HttpGenerationBackend:
    """JSON-over-HTTP text-to-image client.

    Contract: POST {prompt, negative_prompt, guidance_scale, seed, width,
    height} -> {"image": base64 PNG}. Auth token, if any, is read from the
    GENCOLOR_API_TOKEN environment variable.
    """

    def __init__(self, url: str, timeout: float = 120.0, retries: int = DEFAULT_RETRIES):
        import httpx

        self.url = url
        self.retries = retries
        headers = {}
        token = os.environ.get(AUTH_TOKEN_ENV)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self._client = httpx.Client(timeout=timeout, headers=headers)

    def generate(self, request: GenerationRequest) -> np.ndarray:
        payload = {
            "prompt": request.positive_prompt,
            "negative_prompt": request.negative_prompt,
            "guidance_scale": request.guidance_scale,
            "seed": request.seed,
            "width": request.width,
            "height": request.height,
        }
        delay = 1.0
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                resp = self._client.post(self.url, json=payload)
                resp.raise_for_status()
                data = resp.json()
                raw = base64.b64decode(data["image"])
                img = Image.open(io.BytesIO(raw)).convert("RGB")
                return np.asarray(img, dtype=np.uint8)
            except Exception as exc:  # noqa: BLE001 - any transport error retries
                last_exc = exc
                if attempt < self.retries:
                    time.sleep(delay)
                    delay *= 2
        raise BackendUnavailableError(f"generation failed after retries: {last_exc}")


class FixtureGenerationBackend:
    """Serves pre-rendered PNGs from a directory, one per request in order.

    Raises when it runs out of files, which the corpus assembler records as
    a per-request failure.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._files = sorted(self.directory.glob("*.png"))
        self._next = 0

    def generate(self, request: GenerationRequest) -> np.ndarray:
        if self._next >= len(self._files):
            raise BackendUnavailableError("fixture backend exhausted")
        path = self._files[self._next]
        self._next += 1
        img = Image.open(path).convert("RGB")
        return np.asarray(img, dtype=np.uint8)


def generate_corpus(
    requests: list[GenerationRequest],
    backend,
    spec: ConceptSpec,
    parallelism: int = 4,
    min_success_fraction: float = DEFAULT_MIN_SUCCESS_FRACTION,
    source: ImageSource = ImageSource.GENERATED,
) -> ImageCorpus:
    """Run requests against a backend and assemble an ordered corpus.

    Individual failures are logged and skipped; if fewer than
    min_success_fraction of requests succeed the whole corpus is rejected.
    """
    if not requests:
        raise ValueError("request list must be non-empty")

    def run(pair):
        index, request = pair
        try:
            return index, backend.generate(request), None
        except Exception as exc:  # noqa: BLE001
            return index, None, exc

    if parallelism > 1 and not isinstance(backend, FixtureGenerationBackend):
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(run, enumerate(requests)))
    else:
        results = [run(p) for p in enumerate(requests)]

    width = len(str(len(requests) - 1))
    samples = []
    for index, pixels, exc in results:
        if exc is not None:
            log.warning("request %d failed: %s", index, exc)
            continue
        samples.append(
            ImageSample(
                identifier=f"img_{index:0{width}d}",
                pixels=pixels,
                source=source,
                request_metadata=requests[index],
            )
        )
    if len(samples) < min_success_fraction * len(requests):
        raise PartialCorpusError(
            f"only {len(samples)}/{len(requests)} requests succeeded"
        )
    return ImageCorpus(concept_spec=spec, samples=samples)


def load_fixture_corpus(
    directory: str | Path,
    spec: ConceptSpec,
    source: ImageSource = ImageSource.FIXTURE,
) -> ImageCorpus:
    """Load every decodable image in a directory, sorted by filename."""
    directory = Path(directory)
    paths = sorted(
        p for p in directory.iterdir()
        if p.suffix.lower() in (".png", ".jpg", ".jpeg", ".bmp", ".webp")
        and not p.name.endswith(".mask.png")
    )
    samples = []
    for path in paths:
        try:
            img = Image.open(path).convert("RGB")
        except Exception as exc:  # noqa: BLE001
            log.warning("skipping undecodable image %s: %s", path, exc)
            continue
        samples.append(
            ImageSample(
                identifier=path.stem,
                pixels=np.asarray(img, dtype=np.uint8),
                source=source,
            )
        )
    if not samples:
        raise NoImagesFoundError(f"no decodable images in {directory}")
    return ImageCorpus(concept_spec=spec, samples=samples)


def save_corpus(corpus: ImageCorpus, directory: str | Path) -> None:
    """Persist a corpus as lossless PNGs with JSON request sidecars."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for sample in corpus.samples:
        Image.fromarray(sample.pixels).save(directory / f"{sample.identifier}.png")
        meta = {"source": sample.source.value}
        if sample.request_metadata is not None:
            r = sample.request_metadata
            meta["request"] = {
                "positive_prompt": r.positive_prompt,
                "negative_prompt": r.negative_prompt,
                "guidance_scale": r.guidance_scale,
                "seed": r.seed,
                "width": r.width,
                "height": r.height,
            }
        (directory / f"{sample.identifier}.json").write_text(
            json.dumps(meta, indent=2)
        )
