"""Subject-area classification of citing entities.

Journals (ISSN) are looked up directly in the SCImago index. Books (ISBN) go
through the Library of Congress Classification bridge: alphabetic LCC prefix
-> discipline label -> SCImago area or category, falling back to a manual
queue when no label matches.
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError, ValidationError
from .identifiers import classify_source_id

logger = logging.getLogger(__name__)

MISCELLANEOUS_SUFFIX = " (miscellaneous)"

PROVENANCE_ISSN = "issn-scimago"
PROVENANCE_ISBN_AREA = "isbn-lcc-area"
PROVENANCE_ISBN_CATEGORY = "isbn-lcc-category"
PROVENANCE_PENDING = "manual-pending"
PROVENANCE_MANUAL = "manual"

_LCC_PREFIX_RE = re.compile(r"^([A-Z]{1,3})")


@dataclass(frozen=True)
class SubjectAssignment:
    doi: str
    areas: frozenset[str]
    categories: frozenset[str]
    provenance: str

    def __post_init__(self):
        if self.provenance != PROVENANCE_PENDING and bool(self.areas) != bool(self.categories):
            raise ValidationError("areas and categories must be both empty or both non-empty")


@dataclass
class MappingTables:
    scimago_journal_index: dict[str, tuple[frozenset[str], frozenset[str]]] = field(default_factory=dict)
    lcc_discipline_index: dict[str, str] = field(default_factory=dict)
    scimago_area_index: dict[str, str] = field(default_factory=dict)
    scimago_category_index: dict[str, tuple[str, str]] = field(default_factory=dict)
    isbn_lcc_index: dict[str, str] = field(default_factory=dict)


def _norm_label(label: str) -> str:
    return label.strip().lower()


def _norm_issn(issn: str) -> str:
    return issn.replace("-", "").strip().upper()


def _norm_isbn(isbn: str) -> str:
    return isbn.replace("-", "").replace(" ", "").strip().upper()


def load_tables(directory: str | Path) -> MappingTables:
    """Load the bundled CSV snapshots of SCImago / LCC / ISBN lookups.

    Expected files: scimago_journals.csv (issn,areas,categories with
    ``;``-separated multi-values), lcc_disciplines.csv (prefix,discipline),
    scimago_areas.csv (label,area), scimago_categories.csv
    (label,category,parent_area), isbn_lcc.csv (isbn,lcc).
    """
    directory = Path(directory)
    tables = MappingTables()

    def read(name: str):
        path = directory / name
        if not path.exists():
            raise ConfigurationError(f"mapping table missing: {path}")
        with open(path, newline="", encoding="utf-8") as fh:
            yield from csv.DictReader(fh)

    for row in read("scimago_journals.csv"):
        areas = frozenset(_norm_label(a) for a in row["areas"].split(";") if a.strip())
        cats = frozenset(_norm_label(c) for c in row["categories"].split(";") if c.strip())
        tables.scimago_journal_index[_norm_issn(row["issn"])] = (areas, cats)
    for row in read("lcc_disciplines.csv"):
        tables.lcc_discipline_index[row["prefix"].strip().upper()] = _norm_label(row["discipline"])
    for row in read("scimago_areas.csv"):
        tables.scimago_area_index[_norm_label(row["label"])] = _norm_label(row["area"])
    for row in read("scimago_categories.csv"):
        tables.scimago_category_index[_norm_label(row["label"])] = (
            _norm_label(row["category"]), _norm_label(row["parent_area"]))
    for row in read("isbn_lcc.csv"):
        tables.isbn_lcc_index[_norm_isbn(row["isbn"])] = row["lcc"].strip().upper()
    return tables


def _pending(doi: str) -> SubjectAssignment:
    return SubjectAssignment(doi, frozenset(), frozenset(), PROVENANCE_PENDING)


def classify_by_issn(doi: str, issn: str, tables: MappingTables) -> SubjectAssignment:
    """All areas and categories attached to the journal; unknown ISSN -> manual queue."""
    entry = tables.scimago_journal_index.get(_norm_issn(issn))
    if entry is None:
        return _pending(doi)
    areas, categories = entry
    return SubjectAssignment(doi, areas, categories, PROVENANCE_ISSN)


def map_lcc(doi: str, isbn: str, tables: MappingTables) -> SubjectAssignment:
    """Map an ISBN through the 4-step LCC bridge.

    1. alphabetic LCC prefix -> discipline label;
    2. discipline matching an area label -> that area, category
       "<area> (miscellaneous)";
    3. discipline matching a category label -> that category plus its parent
       macro area;
    4. otherwise queue for manual annotation.
    """
    lcc = tables.isbn_lcc_index.get(_norm_isbn(isbn))
    if lcc is None:
        return _pending(doi)
    match = _LCC_PREFIX_RE.match(lcc)
    if not match:
        return _pending(doi)
    discipline = tables.lcc_discipline_index.get(match.group(1))
    if discipline is None:
        return _pending(doi)

    area = tables.scimago_area_index.get(discipline)
    if area is not None:
        return SubjectAssignment(doi, frozenset({area}),
                                 frozenset({area + MISCELLANEOUS_SUFFIX}),
                                 PROVENANCE_ISBN_AREA)
    cat_entry = tables.scimago_category_index.get(discipline)
    if cat_entry is not None:
        category, parent_area = cat_entry
        return SubjectAssignment(doi, frozenset({parent_area}), frozenset({category}),
                                 PROVENANCE_ISBN_CATEGORY)
    return _pending(doi)


def classify_venue(doi: str, source_id: str | None, tables: MappingTables) -> SubjectAssignment:
    """Dispatch on identifier kind; absent or unrecognized ids go to the manual queue."""
    if not source_id or not source_id.strip():
        return _pending(doi)
    kind = classify_source_id(source_id)
    if kind == "issn":
        return classify_by_issn(doi, source_id, tables)
    if kind == "isbn":
        return map_lcc(doi, source_id, tables)
    raise ValidationError(f"source id is neither ISSN nor ISBN: {source_id!r}")


def classify_file(in_path: str | Path, tables_dir: str | Path, out_path: str | Path) -> list[SubjectAssignment]:
    """Append area/category columns to a harvest CSV."""
    tables = load_tables(tables_dir)
    assignments = []
    with open(in_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        fieldnames = list(reader.fieldnames or [])
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(fieldnames + ["area", "category"])
        for row in rows:
            source_id = (row.get("source_id") or "").strip()
            try:
                assignment = classify_venue(row["doi"], source_id or None, tables)
            except ValidationError:
                logger.warning("unrecognized source id %r for %s", source_id, row["doi"])
                assignment = _pending(row["doi"])
            assignments.append(assignment)
            writer.writerow([row.get(f, "") for f in fieldnames]
                            + [";".join(sorted(assignment.areas)),
                               ";".join(sorted(assignment.categories))])
    return assignments
