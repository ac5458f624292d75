"""HTTP JSON API backing the annotation workbench."""

from __future__ import annotations

import logging
from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .annotate import (
    Annotation,
    AnnotationStore,
    DecisionGrid,
    detect_retraction_mention,
    priority,
    resolve_intent,
)
from .errors import ConflictError, ValidationError
from .extract import InTextCitation

logger = logging.getLogger(__name__)


class ScoreRequest(BaseModel):
    candidates: list[str]


class AnnotationIn(BaseModel):
    doi: str
    pointer_index: int
    intent: str
    sentiment: str
    retraction_mentioned: bool
    annotator: str = "anonymous"
    version: int = 1


def create_app(citations: list[InTextCitation], store: AnnotationStore,
               ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="retrace annotation service")
    grid: DecisionGrid = store.grid
    # pointer_index is the occurrence index of a citation within its entity
    indexed: list[tuple[str, int, InTextCitation]] = []
    per_doi: dict[str, int] = {}
    for cit in citations:
        idx = per_doi.get(cit.doi, 0)
        per_doi[cit.doi] = idx + 1
        indexed.append((cit.doi, idx, cit))

    def progress_counts() -> dict:
        annotated = sum(1 for doi, idx, _ in indexed if store.latest(doi, idx))
        return {"total": len(indexed), "annotated": annotated,
                "remaining": len(indexed) - annotated}

    @app.get("/grid")
    def get_grid():
        return {"entries": [asdict(e) for e in grid.entries]}

    @app.get("/queue")
    def get_queue():
        for doi, idx, cit in indexed:
            if store.latest(doi, idx) is None:
                return {
                    "doi": doi,
                    "pointer_index": idx,
                    "pointer": cit.pointer,
                    "context": cit.context,
                    "section_kind": cit.section_kind,
                    "section_title": cit.section_title,
                    "suggestion": {
                        "retraction_mentioned": detect_retraction_mention(cit.context),
                    },
                    "progress": progress_counts(),
                }
        return {"done": True, "progress": progress_counts()}

    @app.post("/score")
    def post_score(req: ScoreRequest):
        try:
            priorities = {f: priority(f, grid) for f in req.candidates}
            resolved = resolve_intent(set(req.candidates), grid)
        except ValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"priorities": priorities, "resolved": resolved}

    @app.post("/annotations")
    def post_annotation(payload: AnnotationIn):
        try:
            ann = Annotation(**payload.model_dump())
            version = store.record(ann)
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail={
                "message": str(exc), "current_version": exc.current_version})
        except ValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"version": version}

    @app.get("/progress")
    def get_progress():
        return progress_counts()

    if ui_dir:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
