"""Persistent palette gallery with text search, plus an async job manager.

Storage is a single append-log of JSON records with an in-memory index;
re-storing an entry with the same (spec, params) fingerprint upserts. The
log is replayed on open, so the gallery survives process restarts.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from gencolor.association import PaletteComposition
from gencolor.prompts import ConceptSpec, Style

DATA_DIR_ENV = "GENCOLOR_DATA_DIR"

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class StorageFailure(RuntimeError):
    pass


def spec_fingerprint(spec: ConceptSpec) -> str:
    blob = json.dumps(
        {
            "concept": spec.concept,
            "context": spec.context,
            "style": spec.style_phrase(),
            "lighting": spec.lighting,
            "audience": spec.audience,
            "image_count": spec.image_count,
            "resolution": spec.resolution,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class GalleryEntry:
    entry_id: str
    spec: ConceptSpec
    palettes: list[PaletteComposition]
    tag: str = ""  # style/condition tag, e.g. "G" or "GC"
    created_at: float = 0.0
    param_fingerprint: str = ""
    thumbnails: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.palettes:
            raise ValueError("an entry needs at least one palette")

    def search_text(self) -> str:
        parts = [self.spec.concept, self.spec.context or "", self.tag,
                 self.spec.style_phrase()]
        return " ".join(p for p in parts if p)

    def to_dict(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "spec": {
                "concept": self.spec.concept,
                "context": self.spec.context,
                "style": self.spec.style_phrase(),
                "lighting": self.spec.lighting,
                "audience": self.spec.audience,
                "image_count": self.spec.image_count,
                "resolution": self.spec.resolution,
            },
            "palettes": [p.to_dict() for p in self.palettes],
            "tag": self.tag,
            "created_at": self.created_at,
            "param_fingerprint": self.param_fingerprint,
            "thumbnails": self.thumbnails,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GalleryEntry":
        s = data["spec"]
        style = s["style"]
        try:
            style = Style(style)
        except ValueError:
            pass
        spec = ConceptSpec(
            concept=s["concept"],
            context=s.get("context"),
            style=style,
            lighting=s.get("lighting", "natural light"),
            audience=s.get("audience"),
            image_count=int(s.get("image_count", 50)),
            resolution=int(s.get("resolution", 1024)),
        )
        return cls(
            entry_id=data["entry_id"],
            spec=spec,
            palettes=[PaletteComposition.from_dict(p) for p in data["palettes"]],
            tag=data.get("tag", ""),
            created_at=float(data.get("created_at", 0.0)),
            param_fingerprint=data.get("param_fingerprint", ""),
            thumbnails=list(data.get("thumbnails", [])),
        )


@dataclass(frozen=True)
class SearchQuery:
    text: str
    style: str | None = None
    category: str | None = None
    offset: int = 0
    limit: int = 20

    def __post_init__(self):
        if not (1 <= self.limit <= 100):
            raise ValueError("limit must lie in [1,100]")
        if self.offset < 0:
            raise ValueError("offset must be non-negative")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class GalleryStore:
    """Append-log backed gallery; thread-safe, single-writer serialized."""

    def __init__(self, data_dir: str | Path | None = None):
        if data_dir is None:
            data_dir = os.environ.get(DATA_DIR_ENV, ".gencolor")
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.data_dir / "gallery.log"
        self._lock = threading.Lock()
        self._by_id: dict[str, GalleryEntry] = {}
        self._by_fingerprint: dict[tuple[str, str], str] = {}
        self._replay()

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        for line in self.log_path.read_text().splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("op") == "put":
                self._index(GalleryEntry.from_dict(record["entry"]))

    def _index(self, entry: GalleryEntry) -> None:
        key = (spec_fingerprint(entry.spec), entry.param_fingerprint)
        old_id = self._by_fingerprint.get(key)
        if old_id is not None and old_id != entry.entry_id:
            self._by_id.pop(old_id, None)
        self._by_fingerprint[key] = entry.entry_id
        self._by_id[entry.entry_id] = entry

    def store_entry(self, entry: GalleryEntry) -> str:
        with self._lock:
            key = (spec_fingerprint(entry.spec), entry.param_fingerprint)
            existing = self._by_fingerprint.get(key)
            if existing is not None:
                entry = replace(entry, entry_id=existing)
            try:
                with self.log_path.open("a") as f:
                    f.write(json.dumps({"op": "put", "entry": entry.to_dict()}) + "\n")
                    f.flush()
            except OSError as exc:
                raise StorageFailure(str(exc)) from exc
            self._index(entry)
            return entry.entry_id

    def get(self, entry_id: str) -> GalleryEntry | None:
        with self._lock:
            return self._by_id.get(entry_id)

    def __len__(self) -> int:
        return len(self._by_id)

    def search(self, query: SearchQuery) -> list[GalleryEntry]:
        """Token-overlap ranking: score descending, ties by recency then id."""
        terms = tokenize(query.text)
        if not terms:
            return []
        with self._lock:
            entries = list(self._by_id.values())
        scored = []
        for entry in entries:
            if query.style and query.style.lower() not in entry.spec.style_phrase().lower():
                continue
            entry_tokens = set(tokenize(entry.search_text()))
            score = sum(1 for t in terms if t in entry_tokens)
            if score > 0:
                scored.append((score, entry))
        scored.sort(key=lambda se: (-se[0], -se[1].created_at, se[1].entry_id))
        page = scored[query.offset : query.offset + query.limit]
        return [entry for _, entry in page]


class JobState(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


_STATE_RANK = {
    JobState.PENDING: 0,
    JobState.RUNNING: 1,
    JobState.DONE: 2,
    JobState.FAILED: 2,
}


@dataclass
class JobStatus:
    job_id: str
    state: JobState
    stage: str = ""
    progress: float = 0.0
    entry_id: str | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "state": self.state.value,
            "stage": self.stage,
            "progress": self.progress,
            "entry_id": self.entry_id,
            "error": self.error,
        }


class JobManager:
    """Bounded worker pool running pipeline jobs with monotonic states."""

    def __init__(self, store: GalleryStore, workers: int = 2):
        self.store = store
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._lock = threading.Lock()
        self._jobs: dict[str, JobStatus] = {}

    def _set(self, job_id: str, state: JobState, **kw) -> None:
        with self._lock:
            status = self._jobs[job_id]
            if _STATE_RANK[state] < _STATE_RANK[status.state]:
                return  # never move backwards
            status.state = state
            if "stage" in kw:
                status.stage = kw["stage"]
            if "progress" in kw:
                status.progress = max(status.progress, kw["progress"])
            if "entry_id" in kw:
                status.entry_id = kw["entry_id"]
            if "error" in kw:
                status.error = kw["error"]

    def submit(self, spec: ConceptSpec, runner, tag: str = "",
               param_fingerprint: str = "") -> str:
        """Schedule a pipeline run; `runner(spec, progress)` returns the
        palette list. Returns the job id immediately."""
        job_id = uuid.uuid4().hex
        with self._lock:
            self._jobs[job_id] = JobStatus(job_id=job_id, state=JobState.PENDING)

        def work():
            self._set(job_id, JobState.RUNNING, stage="pipeline", progress=0.0)

            def progress(done, total):
                self._set(job_id, JobState.RUNNING, progress=done / total)

            try:
                palettes = runner(spec, progress)
                entry = GalleryEntry(
                    entry_id=uuid.uuid4().hex,
                    spec=spec,
                    palettes=palettes,
                    tag=tag,
                    created_at=time.time(),
                    param_fingerprint=param_fingerprint,
                )
                entry_id = self.store.store_entry(entry)
                self._set(job_id, JobState.DONE, progress=1.0, entry_id=entry_id)
            except Exception as exc:  # noqa: BLE001 - job failure is a state
                self._set(job_id, JobState.FAILED, error=str(exc))

        self._pool.submit(work)
        return job_id

    def status(self, job_id: str) -> JobStatus | None:
        with self._lock:
            status = self._jobs.get(job_id)
            if status is None:
                return None
            return JobStatus(**status.to_dict() | {"state": status.state})

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)
