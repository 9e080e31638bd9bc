"""Gallery storage, text search, and background pipeline jobs.

The gallery is an append-log of JSON records with an in-memory index, so
entries survive restarts and re-running the same spec upserts in place.
The job manager wraps the pipeline in a worker pool with pollable status.
The same objects back the HTTP service (see `gencolor serve`).
"""

import tempfile
import time
import uuid

from gencolor.association import AssociationParams, PaletteComposition
from gencolor.colorspace import ColorRGB8
from gencolor.gallery import (
    GalleryEntry,
    GalleryStore,
    JobManager,
    JobState,
    SearchQuery,
)
from gencolor.prompts import ConceptSpec, Style


def toy_palette(primary_hex: str) -> PaletteComposition:
    return PaletteComposition(
        primary=ColorRGB8.from_hex(primary_hex),
        accents=[(ColorRGB8.from_hex("#28a03c"), 0.6),
                 (ColorRGB8.from_hex("#3246b4"), 0.4)],
        group_rank=0,
        group_size=12,
        provenance={},
    )


with tempfile.TemporaryDirectory() as tmp:
    store = GalleryStore(tmp)

    specs = [
        ConceptSpec(concept="autumn forest", style=Style.REALISTIC_PHOTO),
        ConceptSpec(concept="tropical forest", style=Style.FLAT_DESIGN),
        ConceptSpec(concept="desert dunes", style=Style.REALISTIC_PHOTO),
    ]
    for i, spec in enumerate(specs):
        store.store_entry(GalleryEntry(
            entry_id=uuid.uuid4().hex,
            spec=spec,
            palettes=[toy_palette("#cb6563")],
            tag="G",
            created_at=float(i),
            param_fingerprint=AssociationParams().fingerprint(),
        ))
    print(f"stored {len(store)} entries")

    # Token-overlap search; ties break by recency then entry id.
    hits = store.search(SearchQuery(text="forest"))
    print("search 'forest':", [h.spec.concept for h in hits])
    hits = store.search(SearchQuery(text="forest", style="flat"))
    print("search 'forest' + style filter:", [h.spec.concept for h in hits])

    # Re-opening the same directory replays the log.
    reopened = GalleryStore(tmp)
    print(f"after restart: {len(reopened)} entries")

    # Background jobs: submit returns immediately, status is pollable and
    # state transitions are monotonic (pending -> running -> done/failed).
    jobs = JobManager(store)

    def slow_runner(spec, progress):
        for step in range(1, 4):
            time.sleep(0.05)
            progress(step, 3)
        return [toy_palette("#1e6fc4")]

    job_id = jobs.submit(ConceptSpec(concept="glacier"), slow_runner, tag="G")
    while True:
        status = jobs.status(job_id)
        print(f"  job {status.state.value} progress {status.progress:.2f}")
        if status.state in (JobState.DONE, JobState.FAILED):
            break
        time.sleep(0.05)
    print("result entry:", store.get(status.entry_id).spec.concept)
    jobs.shutdown()
