"""Command-line interface mirroring the HTTP API plus offline utilities."""

from __future__ import annotations

import json
import sys
import time
import uuid
from pathlib import Path

import click

from gencolor.association import AssociationParams, PaletteComposition
from gencolor.evaluation import BaselineDataset, evaluate
from gencolor.colorspace import ColorRGB8
from gencolor.gallery import GalleryEntry, GalleryStore, JobManager, SearchQuery
from gencolor.glyph import render_palette_svg
from gencolor.pipeline import PipelineOptions, run_pipeline
from gencolor.prompts import ConceptSpec, Style
from gencolor.segmentation import SegmentationParams


def _spec_from_options(concept, context, style, lighting, audience, image_count, resolution):
    try:
        style = Style(style)
    except ValueError:
        pass
    return ConceptSpec(
        concept=concept, context=context, style=style, lighting=lighting,
        audience=audience, image_count=image_count, resolution=resolution,
    )


@click.group()
def main():
    """Mine primary-accent color compositions for concepts."""


@main.command()
@click.argument("concept")
@click.option("--context", default=None)
@click.option("--style", default=Style.REALISTIC_PHOTO.value, show_default=True)
@click.option("--lighting", default="natural light", show_default=True)
@click.option("--audience", default=None)
@click.option("--image-count", default=50, show_default=True)
@click.option("--resolution", default=1024, show_default=True)
@click.option("--backend", type=click.Choice(["http", "fixture"]), default="fixture",
              show_default=True)
@click.option("--backend-url", default="")
@click.option("--corpus-dir", default="", help="fixture image directory")
@click.option("--parallelism", default=4, show_default=True)
@click.option("--seg-backend", type=click.Choice(["http", "fixture", "whole"]),
              default="whole", show_default=True)
@click.option("--detector-url", default="")
@click.option("--masker-url", default="")
@click.option("--box-threshold", default=0.35, show_default=True)
@click.option("--nms-iou", default=0.5, show_default=True)
@click.option("--stride", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--tag", default="", help="condition tag (Q, G, QC, GC, ...)")
@click.option("--out", default="-", help="palette JSON output path, - for stdout")
@click.option("--store/--no-store", default=True, help="persist to the gallery")
def run(concept, context, style, lighting, audience, image_count, resolution,
        backend, backend_url, corpus_dir, parallelism, seg_backend, detector_url,
        masker_url, box_threshold, nms_iou, stride, seed, tag, out, store):
    """Run the full pipeline for one concept and emit palette JSON."""
    spec = _spec_from_options(concept, context, style, lighting, audience,
                              image_count, resolution)
    options = PipelineOptions(
        backend=backend, backend_url=backend_url, corpus_dir=corpus_dir,
        parallelism=parallelism, seg_backend=seg_backend,
        detector_url=detector_url, masker_url=masker_url,
        segmentation=SegmentationParams(box_threshold, nms_iou),
        association=AssociationParams(stride=stride, seed=seed),
        rng_seed=seed,
    )
    palettes = run_pipeline(spec, options)
    payload = json.dumps([p.to_dict() for p in palettes], sort_keys=True, indent=2)
    if out == "-":
        click.echo(payload)
    else:
        Path(out).write_text(payload + "\n")
    if store:
        gallery = GalleryStore()
        entry = GalleryEntry(
            entry_id=uuid.uuid4().hex,
            spec=spec, palettes=palettes, tag=tag, created_at=time.time(),
            param_fingerprint=options.association.fingerprint(),
        )
        entry_id = gallery.store_entry(entry)
        click.echo(f"stored gallery entry {entry_id}", err=True)


@main.command()
@click.argument("query")
@click.option("--style", default=None)
@click.option("--offset", default=0, show_default=True)
@click.option("--limit", default=20, show_default=True)
def search(query, style, offset, limit):
    """Search the gallery by text."""
    gallery = GalleryStore()
    results = gallery.search(SearchQuery(text=query, style=style,
                                         offset=offset, limit=limit))
    click.echo(json.dumps([e.to_dict() for e in results], sort_keys=True, indent=2))


@main.command()
@click.argument("entry_id")
@click.option("--out", default="-")
def export(entry_id, out):
    """Export one gallery entry as JSON."""
    gallery = GalleryStore()
    entry = gallery.get(entry_id)
    if entry is None:
        raise click.ClickException(f"no entry {entry_id}")
    payload = json.dumps(entry.to_dict(), sort_keys=True, indent=2)
    if out == "-":
        click.echo(payload)
    else:
        Path(out).write_text(payload + "\n")


@main.command()
@click.option("--palette", "palette_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--rank", default=0, show_default=True,
              help="palette index when the JSON holds a ranked list")
def glyph(palette_path, out, rank):
    """Render a palette JSON file as a radial glyph SVG."""
    data = json.loads(Path(palette_path).read_text())
    if isinstance(data, list):
        data = data[rank]
    palette = PaletteComposition.from_dict(data)
    Path(out).write_text(render_palette_svg(palette))


@main.command("eval")
@click.option("--baseline", required=True, type=click.Path(exists=True),
              help="designer baseline, JSON lines")
@click.option("--palettes", "palettes_dir", required=True, type=click.Path(exists=True),
              help="directory of <concept>.<condition>.json palette files")
@click.option("--conditions", default="Q,G,QC,GC", show_default=True)
@click.option("--out-prefix", default="report", show_default=True)
def eval_cmd(baseline, palettes_dir, conditions, out_prefix):
    """Compare method primaries against the designer baseline."""
    dataset = BaselineDataset.load_jsonl(baseline)
    wanted = {c.strip() for c in conditions.split(",") if c.strip()}
    method: dict[tuple[str, str], ColorRGB8] = {}
    for path in sorted(Path(palettes_dir).glob("*.json")):
        parts = path.stem.rsplit(".", 1)
        if len(parts) != 2 or parts[1] not in wanted:
            continue
        concept, condition = parts
        data = json.loads(path.read_text())
        if isinstance(data, list):
            data = data[0]  # top-ranked palette
        method[(concept, condition)] = ColorRGB8.from_hex(data["primary"])
    if not method:
        raise click.ClickException("no palette files matched")
    report = evaluate(method, dataset)
    Path(f"{out_prefix}.json").write_text(report.to_json() + "\n")
    Path(f"{out_prefix}.csv").write_text(report.to_csv())
    for (cond, cat), (mean, sd) in sorted(report.aggregates.items()):
        click.echo(f"{cond:>3} {cat:<14} mean={mean:8.3f} sd={sd:8.3f}")
    if report.missing:
        click.echo(f"missing baseline for {len(report.missing)} entries", err=True)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--corpus-dir", default="", help="fixture corpus for pipeline jobs")
@click.option("--backend", type=click.Choice(["http", "fixture"]), default="fixture",
              show_default=True)
@click.option("--backend-url", default="")
@click.option("--workers", default=2, show_default=True)
def serve(host, port, corpus_dir, backend, backend_url, workers):
    """Serve the gallery and pipeline HTTP API."""
    import uvicorn

    from gencolor.service import create_app

    store = GalleryStore()
    jobs = JobManager(store, workers=workers)
    options = PipelineOptions(backend=backend, backend_url=backend_url,
                              corpus_dir=corpus_dir)
    uvicorn.run(create_app(store, jobs, options), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
