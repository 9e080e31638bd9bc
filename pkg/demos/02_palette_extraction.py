"""Palette extraction end to end on a synthetic corpus.

Builds 30 small images that all share one dominant color plus a handful of
accent colors, writes them to a fixture directory, then runs the pipeline:
histogram binning, dominant grouping, top-color banding, and weighted
k-means accents. Finishes by writing a radial glyph SVG for the top group.
"""

import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from gencolor.colorspace import lab_to_srgb_array, srgb_to_lab_array
from gencolor.glyph import render_palette_svg
from gencolor.pipeline import PipelineOptions, run_pipeline
from gencolor.prompts import ConceptSpec, Style

PRIMARY_LAB = np.array([55.0, 40.0, 20.0])
ACCENTS = np.array([[40, 160, 60], [50, 70, 180], [235, 200, 40]], dtype=float)
WEIGHTS = np.array([0.7, 0.12, 0.10, 0.08])  # primary first


def synth_image(index: int, size: int = 96) -> Image.Image:
    rng = np.random.default_rng(500 + index)
    classes = rng.choice(len(WEIGHTS), size=(size, size), p=WEIGHTS)
    lab = PRIMARY_LAB + rng.normal(0.0, 2.5, (size, size, 3))
    rgb = lab_to_srgb_array(lab).astype(float)
    for k, accent in enumerate(ACCENTS, start=1):
        jitter = rng.normal(0.0, 2.0, (size, size, 3))
        rgb = np.where((classes == k)[..., None], accent + jitter, rgb)
    return Image.fromarray(np.clip(np.rint(rgb), 0, 255).astype(np.uint8))


with tempfile.TemporaryDirectory() as tmp:
    corpus_dir = Path(tmp) / "corpus"
    corpus_dir.mkdir()
    for i in range(30):
        synth_image(i).save(corpus_dir / f"img{i:03d}.png")

    spec = ConceptSpec(concept="autumn leaves", style=Style.REALISTIC_PHOTO)
    options = PipelineOptions(backend="fixture", corpus_dir=str(corpus_dir))
    palettes = run_pipeline(spec, options)

    print(f"recovered {len(palettes)} color group(s)")
    top = palettes[0]
    print(f"group 0: {top.group_size} images, primary {top.primary.hex()}")
    truth = lab_to_srgb_array(PRIMARY_LAB)
    print(f"planted primary was rgb{tuple(int(v) for v in truth)}")
    planted_lab = srgb_to_lab_array(truth.astype(float))
    print(f"planted Lab was ({planted_lab[0]:.1f}, "
          f"{planted_lab[1]:.1f}, {planted_lab[2]:.1f})")
    for color, proportion in top.accents:
        print(f"  accent {color.hex()}  proportion {proportion:.3f}")

    out = Path("glyph_demo.svg")
    out.write_text(render_palette_svg(top))
    print(f"wrote {out} ({out.stat().st_size} bytes)")
