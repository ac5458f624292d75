"""Declarative end-to-end pipeline with digest-based stage skipping.

Stages run in dependency order: harvest -> classify -> extract ->
annotate-export -> model -> viz -> report. Each stage records SHA-256 digests
of its inputs and outputs in the run manifest; a stage whose digests are
unchanged since the previous run is skipped.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import annotate as annotate_mod
from . import classify as classify_mod
from . import extract as extract_mod
from . import harvest as harvest_mod
from . import report as report_mod
from . import viz as viz_mod
from .errors import ConfigurationError, DependencyError, ValidationError
from .topics import Corpus, StopwordConfig, preprocess, train_lda, vectorize_tfidf
from .topics.lda import LdaModel

logger = logging.getLogger(__name__)

STAGES = ["harvest", "classify", "extract", "annotate-export", "model", "viz", "report"]

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["seed_doi", "endpoint", "retraction_db", "tables_dir",
                 "texts_dir", "patterns", "annotations_log", "periods", "out_dir"],
    "properties": {
        "seed_doi": {"type": "string"},
        "endpoint": {"type": "string"},
        "retraction_db": {"type": "string"},
        "tables_dir": {"type": "string"},
        "texts_dir": {"type": "string"},
        "patterns": {"type": "string"},
        "annotations_log": {"type": "string"},
        "periods": {"type": "array", "items": {"type": "integer"},
                    "minItems": 4, "maxItems": 4},
        "model": {"type": "object"},
        "out_dir": {"type": "string"},
    },
}


@dataclass
class PipelineConfig:
    seed_doi: str
    endpoint: str
    retraction_db: str
    tables_dir: str
    texts_dir: str
    patterns: str
    annotations_log: str
    periods: tuple[int, int, int, int]
    out_dir: str
    model: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        raw = json.loads(Path(path).read_text())
        missing = [k for k in CONFIG_SCHEMA["required"] if k not in raw]
        if missing:
            raise ConfigurationError(f"config missing keys: {missing}")
        config = cls(
            seed_doi=raw["seed_doi"], endpoint=raw["endpoint"],
            retraction_db=raw["retraction_db"], tables_dir=raw["tables_dir"],
            texts_dir=raw["texts_dir"], patterns=raw["patterns"],
            annotations_log=raw["annotations_log"],
            periods=tuple(raw["periods"]), out_dir=raw["out_dir"],
            model=raw.get("model", {}),
        )
        config.validate()
        return config

    def validate(self):
        report_mod.PeriodConfig(*self.periods)  # checks ordering
        for name in ("endpoint", "retraction_db", "tables_dir", "texts_dir",
                     "patterns"):
            if not Path(getattr(self, name)).exists():
                raise ConfigurationError(f"{name} path does not exist: {getattr(self, name)}")

    def period_config(self) -> report_mod.PeriodConfig:
        return report_mod.PeriodConfig(*self.periods)


def _digest_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def digest_path(path: str | Path) -> str:
    """SHA-256 of a file, or of the sorted (name, digest) list of a directory."""
    path = Path(path)
    if path.is_file():
        return _digest_file(path)
    if path.is_dir():
        parts = []
        for child in sorted(path.rglob("*")):
            if child.is_file():
                parts.append(f"{child.relative_to(path)}:{_digest_file(child)}")
        return hashlib.sha256("\n".join(parts).encode()).hexdigest()
    raise DependencyError(f"missing artifact: {path}")


class Pipeline:
    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out = Path(config.out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.manifest_path = self.out / "manifest.json"

    # artifact paths
    @property
    def harvest_csv(self): return self.out / "harvest.csv"
    @property
    def abstracts_csv(self): return self.out / "abstracts.csv"
    @property
    def classified_csv(self): return self.out / "classified.csv"
    @property
    def citations_csv(self): return self.out / "citations.csv"
    @property
    def annotated_csv(self): return self.out / "annotated.csv"
    @property
    def model_dir(self): return self.out / "model.dir"
    @property
    def report_dir(self): return self.out / "report"

    def stage_io(self) -> dict[str, tuple[list[Path], list[Path]]]:
        cfg = self.config
        viz_outputs = [self.out / "ldavis.json", self.out / "mtm_period.json",
                       self.out / "mtm_area.json"]
        return {
            "harvest": ([Path(cfg.endpoint), Path(cfg.retraction_db)],
                        [self.harvest_csv, self.abstracts_csv]),
            "classify": ([self.harvest_csv, Path(cfg.tables_dir)], [self.classified_csv]),
            "extract": ([Path(cfg.texts_dir), Path(cfg.patterns), self.classified_csv],
                        [self.citations_csv]),
            "annotate-export": ([Path(cfg.annotations_log)], [self.annotated_csv]),
            "model": ([self.citations_csv, self.abstracts_csv], [self.model_dir]),
            "viz": ([self.model_dir, self.classified_csv], viz_outputs),
            "report": ([self.classified_csv, self.citations_csv, self.annotated_csv],
                       [self.report_dir]),
        }

    def run(self, stages: list[str] | None = None) -> list[dict]:
        requested = stages or STAGES
        unknown = [s for s in requested if s not in STAGES]
        if unknown:
            raise ValidationError(f"unknown stages: {unknown}")
        ordered = [s for s in STAGES if s in requested]
        previous = self._load_manifest()
        manifest: list[dict] = []
        io = self.stage_io()
        runners = {
            "harvest": self._run_harvest,
            "classify": self._run_classify,
            "extract": self._run_extract,
            "annotate-export": self._run_annotate_export,
            "model": self._run_model,
            "viz": self._run_viz,
            "report": self._run_report,
        }
        try:
            for stage in ordered:
                inputs, outputs = io[stage]
                missing = [str(p) for p in inputs if not p.exists()]
                if missing:
                    raise DependencyError(
                        f"stage {stage!r} is missing upstream artifacts: {missing}")
                input_digests = {str(p): digest_path(p) for p in inputs}
                prev = previous.get(stage)
                if (prev and prev["input_digests"] == input_digests
                        and all(p.exists() for p in outputs)
                        and prev["output_digests"] == {str(p): digest_path(p) for p in outputs}):
                    entry = dict(prev, status="skipped", seconds=0.0)
                    manifest.append(entry)
                    logger.info("stage %s skipped (digests unchanged)", stage)
                    continue
                started = time.monotonic()
                runners[stage]()
                entry = {
                    "stage": stage,
                    "status": "executed",
                    "input_digests": input_digests,
                    "output_digests": {str(p): digest_path(p) for p in outputs},
                    "seconds": round(time.monotonic() - started, 4),
                }
                manifest.append(entry)
                logger.info("stage %s executed in %.2fs", stage, entry["seconds"])
        finally:
            if manifest:
                self._save_manifest(manifest, previous)
        return manifest

    def _load_manifest(self) -> dict[str, dict]:
        if not self.manifest_path.exists():
            return {}
        entries = json.loads(self.manifest_path.read_text())
        return {e["stage"]: e for e in entries}

    def _save_manifest(self, manifest: list[dict], previous: dict[str, dict]):
        merged = dict(previous)
        for entry in manifest:
            merged[entry["stage"]] = entry
        ordered = [merged[s] for s in STAGES if s in merged]
        self.manifest_path.write_text(json.dumps(ordered, indent=2))

    # stage implementations

    def _run_harvest(self):
        cfg = self.config
        transport = harvest_mod.open_transport(cfg.endpoint)
        citations = harvest_mod.fetch_citations(cfg.seed_doi, cfg.endpoint, transport=transport)
        if citations:
            result = harvest_mod.fetch_metadata(
                [c.citing_doi for c in citations], cfg.endpoint, transport=transport)
        else:
            result = harvest_mod.MetadataResult(records=[], misses=[])
        db = harvest_mod.load_retraction_db(cfg.retraction_db)
        statuses = harvest_mod.lookup_retraction_status(
            [m.doi for m in result.records], db)
        harvest_mod.write_harvest_csv(self.harvest_csv, result.records, statuses)
        with open(self.abstracts_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["doi", "abstract"])
            for meta in result.records:
                writer.writerow([meta.doi, meta.abstract or ""])

    def _run_classify(self):
        classify_mod.classify_file(self.harvest_csv, self.config.tables_dir,
                                   self.classified_csv)

    def _run_extract(self):
        patterns = extract_mod.load_patterns(self.config.patterns)
        citations, review = extract_mod.extract_corpus(self.config.texts_dir, patterns)
        extract_mod.write_citations_csv(self.citations_csv, citations)
        if review:
            (self.out / "extract_review.json").write_text(json.dumps(review, indent=2))

    def _run_annotate_export(self):
        store = annotate_mod.AnnotationStore(self.config.annotations_log)
        annotate_mod.export_annotations_csv(store, self.annotated_csv)

    def _build_corpus(self) -> Corpus:
        field_name = self.config.model.get("field", "context")
        corpus = Corpus()
        if field_name == "context":
            stopwords = StopwordConfig.for_contexts(
                frozenset(self.config.model.get("reference_stopwords", [])))
            per_doi: dict[str, int] = {}
            for cit in extract_mod.read_citations_csv(self.citations_csv):
                idx = per_doi.get(cit.doi, 0)
                per_doi[cit.doi] = idx + 1
                corpus.add(f"{cit.doi}#{idx}", "context", preprocess(cit.context, stopwords))
        elif field_name == "abstract":
            stopwords = StopwordConfig.for_abstracts()
            with open(self.abstracts_csv, newline="", encoding="utf-8") as fh:
                for row in csv.DictReader(fh):
                    if row["abstract"].strip():
                        corpus.add(row["doi"], "abstract",
                                   preprocess(row["abstract"], stopwords))
        else:
            raise ValidationError(f"unknown model field: {field_name!r}")
        return corpus

    def _run_model(self):
        corpus = self._build_corpus()
        vectors, _ = vectorize_tfidf(corpus)
        model = train_lda(
            vectors,
            K=int(self.config.model.get("k", 5)),
            iterations=int(self.config.model.get("iterations", 100)),
            seed=int(self.config.model.get("seed", 0)),
        )
        model.save(self.model_dir, dictionary=corpus.dictionary)
        doc_ids = [doc.doc_id for doc in corpus.documents]
        (self.model_dir / "doc_ids.json").write_text(json.dumps(doc_ids))

    def _entity_metadata(self) -> tuple[dict[str, int], dict[str, list[str]]]:
        years: dict[str, int] = {}
        areas: dict[str, list[str]] = {}
        with open(self.classified_csv, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                years[row["doi"]] = int(row["year"])
                areas[row["doi"]] = [a for a in row.get("area", "").split(";") if a]
        return years, areas

    def _run_viz(self):
        model = LdaModel.load(self.model_dir)
        doc_ids = json.loads((self.model_dir / "doc_ids.json").read_text())
        id2token = []
        with open(self.model_dir / "dictionary.csv", newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                id2token.append(row["token"])
        lam = float(self.config.model.get("lambda", viz_mod.DEFAULT_LAMBDA))
        payload = viz_mod.ldavis_payload(model, id2token, lam=lam)
        viz_mod.write_ldavis_json(payload, self.out / "ldavis.json")

        years, areas = self._entity_metadata()
        period_cfg = self.config.period_config()

        def entity_of(doc_id: str) -> str:
            return doc_id.split("#")[0]

        period_meta = {}
        area_meta = {}
        for doc_id in doc_ids:
            doi = entity_of(doc_id)
            year = years.get(doi)
            period_meta[doc_id] = ([report_mod.partition_period(year, period_cfg)]
                                   if year is not None else [])
            area_meta[doc_id] = areas.get(doi, [])
        viz_mod.write_mtm_json(
            viz_mod.mtm_aggregate(model.theta, doc_ids, period_meta, "period"),
            self.out / "mtm_period.json")
        viz_mod.write_mtm_json(
            viz_mod.mtm_aggregate(model.theta, doc_ids, area_meta, "area"),
            self.out / "mtm_area.json")

    def _run_report(self):
        years, areas = self._entity_metadata()
        contexts: dict[str, list[str]] = {}
        citation_rows = extract_mod.read_citations_csv(self.citations_csv)
        for cit in citation_rows:
            contexts.setdefault(cit.doi, []).append(cit.context)
        entities = [
            report_mod.EntityRow(
                doi=doi, year=year, areas=areas.get(doi, []),
                mentions_retraction=annotate_mod.roll_up_entity_mention(
                    contexts.get(doi, [])))
            for doi, year in years.items()
        ]
        annotations = {(a["doi"], a["pointer_index"]): a
                       for a in annotate_mod.read_annotations_csv(self.annotated_csv)}
        per_doi: dict[str, int] = {}
        annotated: list[report_mod.AnnotatedCitation] = []
        for cit in citation_rows:
            idx = per_doi.get(cit.doi, 0)
            per_doi[cit.doi] = idx + 1
            ann = annotations.get((cit.doi, idx))
            if ann is None:
                continue
            annotated.append(report_mod.AnnotatedCitation(
                doi=cit.doi, year=years.get(cit.doi, 0),
                section_kind=cit.section_kind,
                intent=ann["intent"], sentiment=ann["sentiment"]))
        report_mod.write_reports(self.report_dir, entities, annotated,
                                 self.config.period_config())


def run_pipeline(config: PipelineConfig, stages: list[str] | None = None) -> list[dict]:
    return Pipeline(config).run(stages)
