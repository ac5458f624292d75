"""Command-line interface."""

from __future__ import annotations

import csv
import json
import logging
import sys
from pathlib import Path

import click

from . import annotate as annotate_mod
from . import classify as classify_mod
from . import extract as extract_mod
from . import harvest as harvest_mod
from . import report as report_mod
from . import viz as viz_mod
from .errors import RetraceError
from .pipeline import PipelineConfig, run_pipeline
from .topics import Corpus, StopwordConfig, preprocess, sweep_select_k, train_lda, vectorize_tfidf
from .topics.lda import LdaModel

logger = logging.getLogger(__name__)


@click.group()
@click.option("--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool):
    """Citation analysis toolkit for a retracted seed article."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--doi", required=True, help="Seed DOI.")
@click.option("--endpoint", required=True, help="Index base URL or fixture path.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--retraction-db", required=True, type=click.Path(exists=True))
def harvest(doi, endpoint, out_path, retraction_db):
    """Harvest citing entities and their metadata."""
    result = harvest_mod.run_harvest(doi, endpoint, retraction_db, out_path)
    click.echo(f"wrote {len(result.records)} entities to {out_path} "
               f"({len(result.misses)} unresolved)")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--tables", "tables_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def classify(in_path, tables_dir, out_path):
    """Assign subject areas/categories from venue identifiers."""
    assignments = classify_mod.classify_file(in_path, tables_dir, out_path)
    assigned = sum(1 for a in assignments if a.areas)
    click.echo(f"classified {assigned}/{len(assignments)} entities -> {out_path}")


@main.command()
@click.option("--texts", "texts_dir", required=True, type=click.Path(exists=True))
@click.option("--entities", required=True, type=click.Path(exists=True))
@click.option("--patterns", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def extract(texts_dir, entities, patterns, out_path):
    """Extract in-text citations with contexts and section kinds."""
    patterns_by_doi = extract_mod.load_patterns(patterns)
    citations, review = extract_mod.extract_corpus(texts_dir, patterns_by_doi)
    extract_mod.write_citations_csv(out_path, citations)
    click.echo(f"extracted {len(citations)} in-text citations -> {out_path}")
    if review:
        click.echo(f"{len(review)} documents matched nothing (manual review)", err=True)


@main.group()
def annotate():
    """Annotation service and export."""


@annotate.command()
@click.option("--citations", "citations_path", required=True, type=click.Path(exists=True))
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--port", default=8000, type=int)
@click.option("--ui", "ui_dir", type=click.Path(exists=True), default=None,
              help="Static workbench bundle to serve.")
def serve(citations_path, store_path, port, ui_dir):
    """Serve the workbench JSON API."""
    import uvicorn

    from .service import create_app

    citations = extract_mod.read_citations_csv(citations_path)
    store = annotate_mod.AnnotationStore(store_path)
    app = create_app(citations, store, ui_dir=ui_dir)
    uvicorn.run(app, host="127.0.0.1", port=port)


@annotate.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def export(store_path, out_path):
    """Export the latest annotation per citation to CSV."""
    store = annotate_mod.AnnotationStore(store_path)
    annotate_mod.export_annotations_csv(store, out_path)
    click.echo(f"exported {len(store.current_state())} annotations -> {out_path}")


def _build_corpus(corpus_path: str, field: str) -> Corpus:
    corpus = Corpus()
    if field == "context":
        stopwords = StopwordConfig.for_contexts(frozenset())
        per_doi: dict[str, int] = {}
        for cit in extract_mod.read_citations_csv(corpus_path):
            idx = per_doi.get(cit.doi, 0)
            per_doi[cit.doi] = idx + 1
            corpus.add(f"{cit.doi}#{idx}", "context", preprocess(cit.context, stopwords))
    else:
        stopwords = StopwordConfig.for_abstracts()
        with open(corpus_path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                if row.get("abstract", "").strip():
                    corpus.add(row["doi"], "abstract", preprocess(row["abstract"], stopwords))
    return corpus


@main.group()
def model():
    """Topic model training and selection."""


@model.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--field", type=click.Choice(["abstract", "context"]), default="context")
@click.option("--kmin", default=1, type=int)
@click.option("--kmax", default=40, type=int)
@click.option("--runs", default=3, type=int)
@click.option("--iterations", default=100, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def sweep(corpus_path, field, kmin, kmax, runs, iterations, seed, out_path):
    """Coherence sweep over a K range with plateau selection."""
    corpus = _build_corpus(corpus_path, field)
    curve, selected = sweep_select_k(
        corpus, range(kmin, kmax + 1), runs_per_k=runs,
        iterations=iterations, base_seed=seed)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "coherence"])
        for k, value in curve.points:
            writer.writerow([k, value])
    if selected is None:
        click.echo("no plateau found; inspect the curve", err=True)
        sys.exit(2)
    click.echo(f"selected K={selected}; curve -> {out_path}")


@model.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--field", type=click.Choice(["abstract", "context"]), default="context")
@click.option("--k", required=True, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--iterations", default=400, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path())
def train(corpus_path, field, k, seed, iterations, out_dir):
    """Train one LDA model and write the model directory."""
    corpus = _build_corpus(corpus_path, field)
    vectors, flagged = vectorize_tfidf(corpus)
    if flagged:
        click.echo(f"{len(flagged)} documents have zero tf-idf vectors", err=True)
    lda = train_lda(vectors, K=k, seed=seed, iterations=iterations)
    lda.save(out_dir, dictionary=corpus.dictionary)
    doc_ids = [doc.doc_id for doc in corpus.documents]
    (Path(out_dir) / "doc_ids.json").write_text(json.dumps(doc_ids))
    click.echo(f"trained K={k} model -> {out_dir}")


@main.command()
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--meta", "meta_path", required=True, type=click.Path(exists=True))
@click.option("--grouping", type=click.Choice(["period", "area", "year"]), default="period")
@click.option("--periods", default="1998,2004,2010,2017", help="publication,partial,full,end")
@click.option("--lam", "--lambda", "lam", default=viz_mod.DEFAULT_LAMBDA, type=float)
@click.option("--out", "out_path", required=True, type=click.Path())
def viz(model_dir, meta_path, grouping, periods, lam, out_path):
    """Emit an MTMvis grouping payload (and ldavis.json next to the model)."""
    model = LdaModel.load(model_dir)
    doc_ids = json.loads((Path(model_dir) / "doc_ids.json").read_text())
    years: dict[str, int] = {}
    areas: dict[str, list[str]] = {}
    with open(meta_path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            years[row["doi"]] = int(row["year"])
            areas[row["doi"]] = [a for a in row.get("area", "").split(";") if a]
    period_cfg = report_mod.PeriodConfig(*(int(y) for y in periods.split(",")))
    metadata: dict[str, list[str]] = {}
    for doc_id in doc_ids:
        doi = doc_id.split("#")[0]
        if grouping == "period":
            year = years.get(doi)
            metadata[doc_id] = ([report_mod.partition_period(year, period_cfg)]
                                if year is not None else [])
        elif grouping == "year":
            metadata[doc_id] = [str(years[doi])] if doi in years else []
        else:
            metadata[doc_id] = areas.get(doi, [])
    payload = viz_mod.mtm_aggregate(model.theta, doc_ids, metadata, grouping)
    viz_mod.write_mtm_json(payload, out_path)
    click.echo(f"wrote {grouping} payload -> {out_path}")


@main.command()
@click.option("--entities", required=True, type=click.Path(exists=True))
@click.option("--annotations", required=True, type=click.Path(exists=True))
@click.option("--citations", "citations_path", required=True, type=click.Path(exists=True))
@click.option("--periods", default="1998,2004,2010,2017")
@click.option("--out", "out_dir", required=True, type=click.Path())
def report(entities, annotations, citations_path, periods, out_dir):
    """Period-partitioned descriptive reports (CSV + JSON)."""
    period_cfg = report_mod.PeriodConfig(*(int(y) for y in periods.split(",")))
    years: dict[str, int] = {}
    areas: dict[str, list[str]] = {}
    with open(entities, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            years[row["doi"]] = int(row["year"])
            areas[row["doi"]] = [a for a in row.get("area", "").split(";") if a]
    citation_rows = extract_mod.read_citations_csv(citations_path)
    contexts: dict[str, list[str]] = {}
    for cit in citation_rows:
        contexts.setdefault(cit.doi, []).append(cit.context)
    entity_rows = [
        report_mod.EntityRow(doi, year, areas.get(doi, []),
                             annotate_mod.roll_up_entity_mention(contexts.get(doi, [])))
        for doi, year in years.items()]
    ann_by_key = {(a["doi"], a["pointer_index"]): a
                  for a in annotate_mod.read_annotations_csv(annotations)}
    per_doi: dict[str, int] = {}
    annotated = []
    for cit in citation_rows:
        idx = per_doi.get(cit.doi, 0)
        per_doi[cit.doi] = idx + 1
        ann = ann_by_key.get((cit.doi, idx))
        if ann:
            annotated.append(report_mod.AnnotatedCitation(
                cit.doi, years.get(cit.doi, 0), cit.section_kind,
                ann["intent"], ann["sentiment"]))
    report_mod.write_reports(out_dir, entity_rows, annotated, period_cfg)
    click.echo(f"reports -> {out_dir}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--stages", default=None, help="Comma-separated subset of stages.")
def run(config_path, stages):
    """Run the end-to-end pipeline from a JSON config."""
    config = PipelineConfig.from_file(config_path)
    subset = stages.split(",") if stages else None
    try:
        manifest = run_pipeline(config, subset)
    except RetraceError as exc:
        click.echo(f"pipeline failed: {exc}", err=True)
        sys.exit(1)
    executed = sum(1 for e in manifest if e["status"] == "executed")
    skipped = sum(1 for e in manifest if e["status"] == "skipped")
    click.echo(f"{executed} stages executed, {skipped} skipped")


if __name__ == "__main__":
    main()
