"""HTTP API over the gallery and pipeline, consumed by the explorer UI.

Endpoints: POST /jobs, GET /jobs/{id}, GET /search, GET /entries/{id},
GET /entries/{id}/glyph.svg.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import Response
from pydantic import BaseModel, Field

from gencolor.gallery import GalleryStore, JobManager, SearchQuery
from gencolor.glyph import render_palette_svg
from gencolor.pipeline import PipelineOptions, run_pipeline
from gencolor.prompts import ConceptSpec, Style


class JobRequest(BaseModel):
    concept: str
    context: str | None = None
    style: str = Style.REALISTIC_PHOTO.value
    lighting: str = "natural light"
    audience: str | None = None
    image_count: int = Field(default=50, ge=1)
    resolution: int = Field(default=1024, ge=64)
    tag: str = ""

    def to_spec(self) -> ConceptSpec:
        style: Style | str = self.style
        try:
            style = Style(self.style)
        except ValueError:
            pass
        return ConceptSpec(
            concept=self.concept,
            context=self.context,
            style=style,
            lighting=self.lighting,
            audience=self.audience,
            image_count=self.image_count,
            resolution=self.resolution,
        )


def create_app(
    store: GalleryStore,
    jobs: JobManager,
    options: PipelineOptions | None = None,
) -> FastAPI:
    app = FastAPI(title="gencolor", version="0.1.0")
    options = options or PipelineOptions()

    def runner(spec, progress):
        return run_pipeline(spec, options, progress=progress)

    @app.post("/jobs", status_code=202)
    def submit_job(request: JobRequest):
        try:
            spec = request.to_spec()
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        job_id = jobs.submit(
            spec, runner, tag=request.tag,
            param_fingerprint=options.association.fingerprint(),
        )
        return {"job_id": job_id}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        status = jobs.status(job_id)
        if status is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return status.to_dict()

    @app.get("/search")
    def search(
        q: str = Query(default=""),
        style: str | None = None,
        offset: int = Query(default=0, ge=0),
        limit: int = Query(default=20, ge=1, le=100),
    ):
        query = SearchQuery(text=q, style=style, offset=offset, limit=limit)
        return {"results": [e.to_dict() for e in store.search(query)]}

    @app.get("/entries/{entry_id}")
    def get_entry(entry_id: str):
        entry = store.get(entry_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown entry")
        return entry.to_dict()

    @app.get("/entries/{entry_id}/glyph.svg")
    def get_glyph(entry_id: str, rank: int = Query(default=0, ge=0)):
        entry = store.get(entry_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown entry")
        if rank >= len(entry.palettes):
            raise HTTPException(status_code=404, detail="no palette at that rank")
        svg = render_palette_svg(entry.palettes[rank])
        return Response(content=svg, media_type="image/svg+xml")

    return app
