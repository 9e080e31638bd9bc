"""End-to-end orchestration: concept spec -> corpus -> masks -> palettes."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from gencolor.association import (
    AssociationParams,
    ImageColorSummary,
    PaletteComposition,
    compose_palettes,
    summarize_image,
)
from gencolor.generation import (
    HttpGenerationBackend,
    ImageCorpus,
    ImageSource,
    generate_corpus,
    load_fixture_corpus,
)
from gencolor.prompts import ConceptSpec, sample_requests
from gencolor.segmentation import (
    HttpDetector,
    HttpMasker,
    NoDetectionsError,
    SegmentationParams,
    load_fixture_mask,
    segment_concept,
    whole_image_mask,
)

log = logging.getLogger(__name__)


@dataclass
class PipelineOptions:
    backend: str = "fixture"  # fixture | http
    backend_url: str = ""
    corpus_dir: str = ""
    parallelism: int = 4
    seg_backend: str = "whole"  # whole | fixture | http
    detector_url: str = ""
    masker_url: str = ""
    segmentation: SegmentationParams = field(default_factory=SegmentationParams)
    no_detection_policy: str = "skip"  # skip | whole
    association: AssociationParams = field(default_factory=AssociationParams)
    rng_seed: int = 0


def acquire_corpus(spec: ConceptSpec, options: PipelineOptions) -> ImageCorpus:
    if options.backend == "fixture":
        return load_fixture_corpus(options.corpus_dir, spec)
    if options.backend == "http":
        requests = sample_requests(spec, options.rng_seed)
        backend = HttpGenerationBackend(options.backend_url)
        return generate_corpus(
            requests, backend, spec,
            parallelism=options.parallelism, source=ImageSource.GENERATED,
        )
    raise ValueError(f"unknown backend {options.backend!r}")


def summarize_corpus(
    corpus: ImageCorpus, options: PipelineOptions,
    progress=None,
) -> list[ImageColorSummary]:
    """Mask and summarize every image; NoDetections follows the configured
    fallback policy."""
    detector = masker = None
    if options.seg_backend == "http":
        detector = HttpDetector(options.detector_url)
        masker = HttpMasker(options.masker_url)
    summaries = []
    for i, sample in enumerate(corpus.samples):
        if options.seg_backend == "whole":
            mask = whole_image_mask(sample)
        elif options.seg_backend == "fixture":
            mask = load_fixture_mask(options.corpus_dir, sample.identifier)
        elif options.seg_backend == "http":
            try:
                mask = segment_concept(
                    sample, corpus.concept_spec.concept,
                    detector, masker, options.segmentation,
                )
            except NoDetectionsError:
                if options.no_detection_policy == "whole":
                    mask = whole_image_mask(sample)
                else:
                    log.warning("no detections for %s, skipping", sample.identifier)
                    continue
        else:
            raise ValueError(f"unknown seg backend {options.seg_backend!r}")
        summaries.append(summarize_image(sample, mask, options.association.stride))
        if progress is not None:
            progress(i + 1, len(corpus.samples))
    return summaries


def run_pipeline(
    spec: ConceptSpec, options: PipelineOptions, progress=None
) -> list[PaletteComposition]:
    corpus = acquire_corpus(spec, options)
    summaries = summarize_corpus(corpus, options, progress=progress)
    corpus_id = options.corpus_dir or f"{spec.concept}:{options.rng_seed}"
    return compose_palettes(summaries, options.association, corpus_id=corpus_id)
