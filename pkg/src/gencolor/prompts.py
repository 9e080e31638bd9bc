"""Prompt construction for the image generation stage.

A concept specification (concept + context + style + lighting + audience)
is turned into positive/negative prompt pairs and per-image sampler
parameters. The builder never injects color words of its own; only
user-supplied text can carry them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

DEFAULT_IMAGE_COUNT = 50
DEFAULT_RESOLUTION = 1024
GUIDANCE_SCALE_RANGE = (3.0, 6.0)

# The eleven basic color terms; the builder must never emit any of these.
BASIC_COLOR_TERMS = (
    "black", "white", "red", "green", "yellow", "blue",
    "brown", "orange", "pink", "purple", "gray",
)


class EmptyConceptError(ValueError):
    pass


class Style(str, Enum):
    REALISTIC_PHOTO = "realistic photo"
    FLAT_DESIGN = "colored flat design"


@dataclass(frozen=True)
class ConceptSpec:
    """The unit of pipeline input: what to depict and how."""

    concept: str
    context: str | None = None
    style: Style | str = Style.REALISTIC_PHOTO
    lighting: str = "natural light"
    audience: str | None = None
    image_count: int = DEFAULT_IMAGE_COUNT
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if not self.concept or not self.concept.strip():
            raise EmptyConceptError("concept must be non-empty")
        if self.image_count < 1:
            raise ValueError("image_count must be >= 1")
        if self.resolution < 64:
            raise ValueError("resolution must be >= 64")

    def style_phrase(self) -> str:
        return self.style.value if isinstance(self.style, Style) else str(self.style)


@dataclass(frozen=True)
class GenerationRequest:
    positive_prompt: str
    negative_prompt: str
    guidance_scale: float
    seed: int
    width: int
    height: int

    def __post_init__(self):
        lo, hi = GUIDANCE_SCALE_RANGE
        if not (lo <= self.guidance_scale <= hi):
            raise ValueError(f"guidance_scale outside [{lo},{hi}]")


# Triggers shipped by default. Abstract or auditory contexts get a concrete
# visual description appended so the image model responds to them.
DEFAULT_ENHANCEMENTS = (
    ("quiet", "evoking feelings of silence and lonely"),
    ("polluted", "exuding a sense of depression and heaviness"),
    ("lively", "radiating energy and joyful movement"),
)


@dataclass(frozen=True)
class ContextEnhancementTable:
    entries: tuple[tuple[str, str], ...] = DEFAULT_ENHANCEMENTS

    def __post_init__(self):
        triggers = [t.strip().lower() for t, _ in self.entries]
        if len(set(triggers)) != len(triggers):
            raise ValueError("enhancement triggers must be unique")

    @classmethod
    def from_file(cls, path: str | Path) -> "ContextEnhancementTable":
        """Load `trigger => phrase` lines; blank lines and # comments allowed."""
        entries = []
        for raw in Path(path).read_text().splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=>" not in line:
                raise ValueError(f"malformed enhancement entry: {raw!r}")
            trigger, phrase = line.split("=>", 1)
            entries.append((trigger.strip(), phrase.strip()))
        return cls(tuple(entries))


def enhance_context(
    spec: ConceptSpec, table: ContextEnhancementTable | None = None
) -> ConceptSpec:
    """Append enhancement phrases for any trigger found in the context.

    Matching is case-insensitive substring; already-present phrases are not
    duplicated, so the operation is idempotent.
    """
    if table is None:
        table = ContextEnhancementTable()
    if not spec.context:
        return spec
    context = spec.context
    lowered = context.lower()
    for trigger, phrase in table.entries:
        if trigger.strip().lower() in lowered and phrase.lower() not in lowered:
            context = f"{context}, {phrase}"
            lowered = context.lower()
    if context == spec.context:
        return spec
    return replace(spec, context=context)


# Negative prompt wording is not fixed by any upstream convention; these
# defaults exclude cropping artifacts plus the style-mismatch failure mode
# for each style, and are overridable per call.
CROPPING_ARTIFACTS = "cropped, out of frame, cut off, partial view, low quality, blurry, watermark, text"
NEGATIVE_FOR_REALISTIC = f"cartoon, 3D render, illustration, {CROPPING_ARTIFACTS}"
NEGATIVE_FOR_FLAT = f"realistic 3D rendering, photorealistic, photograph, {CROPPING_ARTIFACTS}"


def build_prompts(
    spec: ConceptSpec, table: ContextEnhancementTable | None = None
) -> tuple[str, str]:
    """Assemble (positive, negative) prompts from a concept spec.

    Positive prompt order is fixed (style, concept, context, audience,
    lighting) for reproducibility. The negative prompt is style-conditional.
    """
    spec = enhance_context(spec, table)
    parts = [spec.style_phrase(), spec.concept.strip()]
    if spec.context:
        parts.append(spec.context.strip())
    if spec.audience:
        parts.append(f"for {spec.audience.strip()}")
    parts.append(spec.lighting.strip())
    positive = ", ".join(p for p in parts if p)

    if spec.style == Style.REALISTIC_PHOTO:
        negative = NEGATIVE_FOR_REALISTIC
    elif spec.style == Style.FLAT_DESIGN:
        negative = NEGATIVE_FOR_FLAT
    else:
        negative = CROPPING_ARTIFACTS
    return positive, negative


def sample_requests(
    spec: ConceptSpec,
    rng_seed: int,
    table: ContextEnhancementTable | None = None,
) -> list[GenerationRequest]:
    """Draw one GenerationRequest per image, deterministic in rng_seed.

    Guidance scale is drawn per image, uniform over [3,6]; generation seeds
    are drawn-and-rejected until pairwise distinct.
    """
    positive, negative = build_prompts(spec, table)
    rng = random.Random(rng_seed)
    seeds: set[int] = set()
    requests = []
    for _ in range(spec.image_count):
        guidance = rng.uniform(*GUIDANCE_SCALE_RANGE)
        seed = rng.getrandbits(64)
        while seed in seeds:
            seed = rng.getrandbits(64)
        seeds.add(seed)
        requests.append(
            GenerationRequest(
                positive_prompt=positive,
                negative_prompt=negative,
                guidance_scale=guidance,
                seed=seed,
                width=spec.resolution,
                height=spec.resolution,
            )
        )
    return requests
