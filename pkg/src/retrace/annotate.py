"""Citation-intent scoring, retraction-mention detection and annotation storage.

The decision grid ships as a data file so its transcription can be audited;
all scoring goes through it. Annotations live in an append-only JSON-lines
log with optimistic per-citation versioning.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import csv
from dataclasses import dataclass, asdict
from importlib import resources
from pathlib import Path

from .errors import ConfigurationError, ConflictError, ValidationError

logger = logging.getLogger(__name__)

SENTIMENTS = ("positive", "negative", "neutral")
MACRO_CATEGORIES = ("reviewing", "affecting", "referring")

ANNOTATED_CSV_HEADER = [
    "doi",
    "pointer_index",
    "intext_citation.intent",
    "intext_citation.sentiment",
    "retraction_mentioned",
]

_MENTION_RE = re.compile(r"\bretract", re.IGNORECASE)


@dataclass(frozen=True)
class GridEntry:
    function: str
    macro: str
    column_score: int
    row_score: int
    inner_value: float


@dataclass(frozen=True)
class DecisionGrid:
    entries: tuple[GridEntry, ...]

    def __post_init__(self):
        seen_functions = set()
        seen_triples = set()
        seen_priorities = set()
        for e in self.entries:
            if e.macro not in MACRO_CATEGORIES:
                raise ValidationError(f"unknown macro category: {e.macro!r}")
            if not (1 <= e.column_score <= 8):
                raise ValidationError(f"column score out of range for {e.function}")
            if e.row_score not in (10, 20, 30, 40, 50):
                raise ValidationError(f"row score out of range for {e.function}")
            if not (0 < e.inner_value < 1):
                raise ValidationError(f"inner value out of range for {e.function}")
            if e.function in seen_functions:
                raise ValidationError(f"duplicate function: {e.function}")
            seen_functions.add(e.function)
            triple = (e.row_score, e.column_score, round(e.inner_value, 1))
            if triple in seen_triples:
                raise ValidationError(f"duplicate grid cell position for {e.function}")
            seen_triples.add(triple)
            p = _priority_of(e)
            if p in seen_priorities:
                raise ValidationError(f"priority collision at {p} for {e.function}")
            seen_priorities.add(p)

    def functions(self) -> list[str]:
        return [e.function for e in self.entries]

    def entry(self, function: str) -> GridEntry:
        for e in self.entries:
            if e.function == function:
                return e
        raise KeyError(function)


def _priority_of(entry: GridEntry) -> float:
    return round(entry.row_score + entry.column_score + entry.inner_value, 1)


def load_decision_grid(path: str | Path | None = None) -> DecisionGrid:
    """Load the grid transcription (bundled by default)."""
    if path is None:
        ref = resources.files("retrace").joinpath("data/decision_grid.csv")
        text = ref.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    entries = []
    for row in csv.DictReader(text.splitlines()):
        entries.append(GridEntry(
            function=row["function"].strip(),
            macro=row["macro"].strip(),
            column_score=int(row["column_score"]),
            row_score=int(row["row_score"]),
            inner_value=float(row["inner_value"]),
        ))
    if not entries:
        raise ConfigurationError("empty decision grid")
    return DecisionGrid(tuple(entries))


def priority(function: str, grid: DecisionGrid) -> float:
    """Priority sum of a citation function; smaller means higher priority."""
    try:
        return _priority_of(grid.entry(function))
    except KeyError:
        raise ValidationError(f"unknown citation function: {function!r}") from None


def resolve_intent(candidates: set[str] | frozenset[str] | list[str], grid: DecisionGrid) -> str:
    """Pick the candidate with the smallest priority sum.

    Priorities are collision-free by grid invariant, so no tie-break is needed.
    """
    unique = set(candidates)
    if not unique:
        raise ValidationError("candidate set must be non-empty")
    return min(unique, key=lambda f: priority(f, grid))


def detect_retraction_mention(context: str) -> bool:
    """True iff some word starts with "retract" (any derivative form)."""
    return bool(_MENTION_RE.search(context))


def roll_up_entity_mention(contexts: list[str]) -> bool:
    """An entity mentions the retraction if any of its contexts does."""
    return any(detect_retraction_mention(c) for c in contexts)


@dataclass(frozen=True)
class Annotation:
    doi: str
    pointer_index: int
    intent: str
    sentiment: str
    retraction_mentioned: bool
    annotator: str
    version: int

    def __post_init__(self):
        if self.sentiment not in SENTIMENTS:
            raise ValidationError(f"unknown sentiment: {self.sentiment!r}")
        if self.version < 1:
            raise ValidationError("versions start at 1")

    @property
    def citation_id(self) -> tuple[str, int]:
        return (self.doi, self.pointer_index)


class AnnotationStore:
    """Append-only versioned annotation log with optimistic concurrency.

    Each line of the log file is one annotation write; the latest version per
    citation wins on read, and the full history is retained. A write must
    carry version = latest + 1, otherwise it conflicts.
    """

    def __init__(self, path: str | Path, grid: DecisionGrid | None = None):
        self.path = Path(path)
        self.grid = grid or load_decision_grid()
        self._lock = threading.Lock()
        self._latest: dict[tuple[str, int], Annotation] = {}
        self._history: list[Annotation] = []
        if self.path.exists():
            self._replay()

    def _replay(self):
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                ann = Annotation(**json.loads(line))
                self._history.append(ann)
                self._latest[ann.citation_id] = ann

    def record(self, annotation: Annotation) -> int:
        """Append a write; returns the stored version or raises ConflictError."""
        if annotation.intent not in self.grid.functions():
            raise ValidationError(f"intent not in decision grid: {annotation.intent!r}")
        with self._lock:
            current = self._latest.get(annotation.citation_id)
            expected = (current.version + 1) if current else 1
            if annotation.version != expected:
                raise ConflictError(
                    f"stale write for {annotation.citation_id}: "
                    f"got v{annotation.version}, expected v{expected}",
                    current_version=current.version if current else 0)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(asdict(annotation)) + "\n")
            self._history.append(annotation)
            self._latest[annotation.citation_id] = annotation
            return annotation.version

    def latest(self, doi: str, pointer_index: int) -> Annotation | None:
        with self._lock:
            return self._latest.get((doi, pointer_index))

    def current_state(self) -> list[Annotation]:
        with self._lock:
            return sorted(self._latest.values(), key=lambda a: a.citation_id)

    def history(self) -> list[Annotation]:
        with self._lock:
            return list(self._history)


def export_annotations_csv(store: AnnotationStore, out_path: str | Path):
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ANNOTATED_CSV_HEADER)
        for ann in store.current_state():
            writer.writerow([ann.doi, ann.pointer_index, ann.intent, ann.sentiment,
                             "yes" if ann.retraction_mentioned else "no"])


def read_annotations_csv(path: str | Path) -> list[dict]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows.append({
                "doi": row["doi"],
                "pointer_index": int(row["pointer_index"]),
                "intent": row["intext_citation.intent"],
                "sentiment": row["intext_citation.sentiment"],
                "retraction_mentioned": row["retraction_mentioned"].strip().lower() == "yes",
            })
    return rows
