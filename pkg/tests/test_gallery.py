import threading
import time

import pytest

from gencolor.association import PaletteComposition
from gencolor.colorspace import ColorRGB8
from gencolor.gallery import (
    GalleryEntry,
    GalleryStore,
    JobManager,
    JobState,
    SearchQuery,
    spec_fingerprint,
    tokenize,
)
from gencolor.prompts import ConceptSpec


def make_palette():
    return PaletteComposition(
        primary=ColorRGB8(203, 101, 99),
        accents=[(ColorRGB8(40, 160, 60), 0.6), (ColorRGB8(50, 70, 180), 0.4)],
        group_rank=0,
        group_size=5,
        provenance={},
    )


def make_entry(entry_id, concept, context=None, created_at=0.0, params="p1", tag=""):
    return GalleryEntry(
        entry_id=entry_id,
        spec=ConceptSpec(concept=concept, context=context),
        palettes=[make_palette()],
        tag=tag,
        created_at=created_at,
        param_fingerprint=params,
    )


class TestStore:
    def test_store_and_get(self, tmp_path):
        store = GalleryStore(tmp_path)
        entry_id = store.store_entry(make_entry("e1", "fox"))
        assert store.get(entry_id).spec.concept == "fox"

    def test_upsert_same_fingerprint(self, tmp_path):
        store = GalleryStore(tmp_path)
        store.store_entry(make_entry("e1", "fox", created_at=1.0))
        store.store_entry(make_entry("e2", "fox", created_at=2.0))
        assert len(store) == 1

    def test_distinct_params_distinct_entries(self, tmp_path):
        store = GalleryStore(tmp_path)
        store.store_entry(make_entry("e1", "fox", params="p1"))
        store.store_entry(make_entry("e2", "fox", params="p2"))
        assert len(store) == 2

    def test_survives_restart(self, tmp_path):
        store = GalleryStore(tmp_path)
        ids = [
            store.store_entry(make_entry(f"e{i}", concept, params=f"p{i}"))
            for i, concept in enumerate(["clear sky", "polluted sky", "fox"])
        ]
        reopened = GalleryStore(tmp_path)
        assert len(reopened) == 3
        for entry_id in ids:
            assert reopened.get(entry_id) is not None
        results = reopened.search(SearchQuery(text="sky"))
        concepts = {e.spec.concept for e in results}
        assert concepts == {"clear sky", "polluted sky"}

    def test_spec_fingerprint_sensitivity(self):
        a = spec_fingerprint(ConceptSpec(concept="fox"))
        b = spec_fingerprint(ConceptSpec(concept="fox", context="at sunset"))
        assert a != b
        assert a == spec_fingerprint(ConceptSpec(concept="fox"))


def overlap_oracle(entries, text, offset, limit):
    terms = tokenize(text)
    scored = []
    for e in entries:
        score = sum(1 for t in terms if t in set(tokenize(e.search_text())))
        if score > 0:
            scored.append((score, e))
    scored.sort(key=lambda se: (-se[0], -se[1].created_at, se[1].entry_id))
    return [e.entry_id for _, e in scored[offset : offset + limit]]


class TestSearch:
    def test_token_match(self, tmp_path):
        store = GalleryStore(tmp_path)
        for i, concept in enumerate(["clear sky", "polluted sky", "fox"]):
            store.store_entry(make_entry(f"e{i}", concept, params=f"p{i}"))
        results = store.search(SearchQuery(text="sky"))
        assert {e.spec.concept for e in results} == {"clear sky", "polluted sky"}

    def test_empty_query_empty_result(self, tmp_path):
        store = GalleryStore(tmp_path)
        store.store_entry(make_entry("e1", "fox"))
        assert store.search(SearchQuery(text="")) == []

    def test_limit_validated(self):
        with pytest.raises(ValueError):
            SearchQuery(text="x", limit=0)
        with pytest.raises(ValueError):
            SearchQuery(text="x", limit=101)

    def test_hundred_entries_match_scoring_oracle(self, tmp_path):
        import random

        rng = random.Random(99)
        vocab = ["polluted", "clear", "quiet", "lively", "sky", "mountain",
                 "forest", "fox", "apple", "ocean"]
        store = GalleryStore(tmp_path)
        entries = []
        for i in range(100):
            concept = " ".join(rng.sample(vocab, 2))
            context = " ".join(rng.sample(vocab, 1))
            entry = make_entry(
                f"e{i:03d}", concept, context=context,
                created_at=float(rng.randint(0, 50)), params=f"p{i}",
            )
            store.store_entry(entry)
            entries.append(entry)
        for query in ["polluted mountain", "fox", "quiet forest sky"]:
            got = [e.entry_id for e in store.search(SearchQuery(text=query, limit=100))]
            assert got == overlap_oracle(entries, query, 0, 100)

    def test_pagination(self, tmp_path):
        store = GalleryStore(tmp_path)
        for i in range(10):
            store.store_entry(make_entry(f"e{i}", "fox", params=f"p{i}",
                                         created_at=float(i)))
        page1 = store.search(SearchQuery(text="fox", limit=4))
        page2 = store.search(SearchQuery(text="fox", offset=4, limit=4))
        assert len(page1) == 4 and len(page2) == 4
        assert not {e.entry_id for e in page1} & {e.entry_id for e in page2}


class TestJobs:
    def test_successful_job_persists_entry(self, tmp_path):
        store = GalleryStore(tmp_path)
        jobs = JobManager(store, workers=1)

        def runner(spec, progress):
            progress(1, 2)
            progress(2, 2)
            return [make_palette()]

        job_id = jobs.submit(ConceptSpec(concept="fox"), runner)
        deadline = time.time() + 5
        while time.time() < deadline:
            status = jobs.status(job_id)
            if status.state in (JobState.DONE, JobState.FAILED):
                break
            time.sleep(0.01)
        assert status.state == JobState.DONE
        assert store.get(status.entry_id) is not None
        jobs.shutdown()

    def test_failed_job_reports_error(self, tmp_path):
        jobs = JobManager(GalleryStore(tmp_path), workers=1)

        def runner(spec, progress):
            raise RuntimeError("backend down")

        job_id = jobs.submit(ConceptSpec(concept="fox"), runner)
        deadline = time.time() + 5
        while time.time() < deadline:
            status = jobs.status(job_id)
            if status.state in (JobState.DONE, JobState.FAILED):
                break
            time.sleep(0.01)
        assert status.state == JobState.FAILED
        assert "backend down" in status.error
        jobs.shutdown()

    def test_states_monotonic_under_concurrent_polling(self, tmp_path):
        jobs = JobManager(GalleryStore(tmp_path), workers=2)
        rank = {JobState.PENDING: 0, JobState.RUNNING: 1,
                JobState.DONE: 2, JobState.FAILED: 2}

        def runner(spec, progress):
            for i in range(5):
                time.sleep(0.005)
                progress(i + 1, 5)
            return [make_palette()]

        job_id = jobs.submit(ConceptSpec(concept="fox"), runner)
        violations = []

        def poll():
            seen = []
            while True:
                status = jobs.status(job_id)
                seen.append((rank[status.state], status.progress))
                if rank[status.state] == 2:
                    break
                time.sleep(0.001)
            for a, b in zip(seen, seen[1:]):
                if b[0] < a[0] or (b[0] == a[0] and b[1] < a[1] - 1e-12):
                    violations.append((a, b))

        threads = [threading.Thread(target=poll) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout=10)
        assert not violations
        assert jobs.status(job_id).state == JobState.DONE
        jobs.shutdown()

    def test_unknown_job(self, tmp_path):
        jobs = JobManager(GalleryStore(tmp_path))
        assert jobs.status("nope") is None
        jobs.shutdown()
