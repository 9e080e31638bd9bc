"""Prompt construction: concept specs, context enhancement, sampling."""

from gencolor.prompts import (
    BASIC_COLOR_TERMS,
    ConceptSpec,
    ContextEnhancementTable,
    Style,
    build_prompts,
    enhance_context,
    sample_requests,
)

# A minimal spec; only the concept is required.
spec = ConceptSpec(concept="old library")
positive, negative = build_prompts(spec)
print("positive:", positive)
print("negative:", negative)
print()

# Abstract context words get a concrete visual phrase appended.
spec = ConceptSpec(
    concept="alley",
    context="a quiet street at dusk",
    style=Style.FLAT_DESIGN,
    audience="children",
)
print("enhanced context:", enhance_context(spec).context)
print("positive:", build_prompts(spec)[0])
print()

# Enhancement tables are plain text, one `trigger => phrase` per line.
table = ContextEnhancementTable((("stormy", "with dramatic turbulent skies"),))
spec = ConceptSpec(concept="harbor", context="a stormy morning")
print("custom table:", build_prompts(spec, table)[0])
print()

# Sampling is deterministic in the seed: per-image guidance scale in [3,6]
# and pairwise-distinct 64-bit generation seeds.
requests = sample_requests(ConceptSpec(concept="forest", image_count=4), rng_seed=7)
for r in requests:
    print(f"guidance {r.guidance_scale:.3f}  seed {r.seed}  {r.width}x{r.height}")
assert len({r.seed for r in requests}) == len(requests)

# The builder itself never injects basic color words.
for term in BASIC_COLOR_TERMS:
    assert term not in build_prompts(ConceptSpec(concept="forest"))[0]
print("\nno basic color terms injected by the builder")
