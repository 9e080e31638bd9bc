"""Shared fixtures: synthetic corpora with known color ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pytest
from PIL import Image

from gencolor.colorspace import lab_to_srgb_array
from gencolor.generation import ImageSample, ImageSource

# Known composition for the synthetic recovery corpus.
PRIMARY_LAB = np.array([55.0, 40.0, 20.0])
PRIMARY_RGB = (203, 101, 99)
# sigma chosen so ~95% of noisy primary pixels fall within CIEDE2000 6
PRIMARY_SIGMA = 2.9
ACCENT_RGBS = [(40, 160, 60), (50, 70, 180), (235, 200, 40), (60, 40, 35)]
# class weights: primary first, then the four accents
CLASS_WEIGHTS = np.array([0.6, 0.12, 0.12, 0.08, 0.08])


@dataclass
class SyntheticCorpusTruth:
    primary_lab: np.ndarray
    accent_rgbs: list[tuple[int, int, int]]
    weights: np.ndarray


def make_synthetic_image(index: int, side: int = 128) -> np.ndarray:
    """One synthetic image: noisy primary pixels plus flat accent pixels,
    classes drawn i.i.d. per pixel from the fixed weights."""
    rng = np.random.default_rng(1000 + index)
    n = side * side
    classes = rng.choice(len(CLASS_WEIGHTS), size=n, p=CLASS_WEIGHTS)
    pixels = np.zeros((n, 3), dtype=np.uint8)

    is_primary = classes == 0
    count = int(is_primary.sum())
    labs = PRIMARY_LAB + rng.normal(0.0, PRIMARY_SIGMA, (count, 3))
    pixels[is_primary] = lab_to_srgb_array(labs)
    for k, rgb in enumerate(ACCENT_RGBS, start=1):
        sel = classes == k
        jitter = rng.integers(-2, 3, (int(sel.sum()), 3))
        pixels[sel] = np.clip(np.array(rgb) + jitter, 0, 255).astype(np.uint8)
    return pixels.reshape(side, side, 3)


def make_synthetic_samples(count: int = 50, side: int = 128) -> list[ImageSample]:
    return [
        ImageSample(
            identifier=f"syn_{i:03d}",
            pixels=make_synthetic_image(i, side),
            source=ImageSource.FIXTURE,
        )
        for i in range(count)
    ]


@pytest.fixture(scope="session")
def synthetic_truth() -> SyntheticCorpusTruth:
    return SyntheticCorpusTruth(
        primary_lab=PRIMARY_LAB,
        accent_rgbs=ACCENT_RGBS,
        weights=CLASS_WEIGHTS,
    )


@pytest.fixture(scope="session")
def synthetic_samples() -> list[ImageSample]:
    return make_synthetic_samples()


@pytest.fixture(scope="session")
def synthetic_corpus_dir(tmp_path_factory, synthetic_samples):
    """The synthetic samples written to disk as a fixture corpus."""
    directory = tmp_path_factory.mktemp("syncorpus")
    for sample in synthetic_samples:
        Image.fromarray(sample.pixels).save(directory / f"{sample.identifier}.png")
    return directory
