from __future__ import annotations

import csv

import pytest

from retrace.classify import (
    MISCELLANEOUS_SUFFIX,
    PROVENANCE_ISBN_AREA,
    PROVENANCE_ISBN_CATEGORY,
    PROVENANCE_ISSN,
    PROVENANCE_PENDING,
    SubjectAssignment,
    classify_file,
    classify_venue,
    load_tables,
    map_lcc,
)
from retrace.errors import ConfigurationError, ValidationError
from retrace.identifiers import isbn13_checksum_char, issn_checksum_char


def make_isbn(n: int) -> str:
    body = f"97812345{n:04d}"
    return body + isbn13_checksum_char(body)


def make_issn(n: int) -> str:
    body = f"{n:07d}"
    return body[:4] + "-" + body[4:] + issn_checksum_char(body)


KNOWN_ISSN = make_issn(11)
UNKNOWN_ISSN = make_issn(99)
ISBN_AREA = make_isbn(1)       # RC -> medicine (area match)
ISBN_CATEGORY = make_isbn(2)   # QR -> immunology (category match)
ISBN_DEAD_END = make_isbn(3)   # TX -> cooking (no SCImago label)
ISBN_UNINDEXED = make_isbn(4)  # not in the ISBN->LCC index


@pytest.fixture
def tables_dir(tmp_path):
    d = tmp_path / "tables"
    d.mkdir()

    def write(name, rows):
        with open(d / name, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)

    write("scimago_journals.csv", [
        ["issn", "areas", "categories"],
        [KNOWN_ISSN, "Medicine;Social Sciences", "Pediatrics;Communication"],
    ])
    write("lcc_disciplines.csv", [
        ["prefix", "discipline"],
        ["RC", "Medicine"], ["QR", "Immunology"], ["TX", "Cooking"],
    ])
    write("scimago_areas.csv", [
        ["label", "area"],
        ["medicine", "medicine"], ["social sciences", "social sciences"],
    ])
    write("scimago_categories.csv", [
        ["label", "category", "parent_area"],
        ["immunology", "immunology", "immunology and microbiology"],
        ["pediatrics", "pediatrics", "medicine"],
        ["communication", "communication", "social sciences"],
    ])
    write("isbn_lcc.csv", [
        ["isbn", "lcc"],
        [ISBN_AREA, "RC360"], [ISBN_CATEGORY, "QR180"], [ISBN_DEAD_END, "TX715"],
    ])
    return d


class TestLoadTables:
    def test_labels_normalized(self, tables_dir):
        tables = load_tables(tables_dir)
        areas, cats = tables.scimago_journal_index[KNOWN_ISSN.replace("-", "")]
        assert areas == {"medicine", "social sciences"}
        assert cats == {"pediatrics", "communication"}

    def test_missing_table_raises(self, tables_dir):
        (tables_dir / "isbn_lcc.csv").unlink()
        with pytest.raises(ConfigurationError):
            load_tables(tables_dir)


class TestIssnRoute:
    def test_known_journal(self, tables_dir):
        assignment = classify_venue("10.1/x", KNOWN_ISSN, load_tables(tables_dir))
        assert assignment.provenance == PROVENANCE_ISSN
        assert assignment.areas == {"medicine", "social sciences"}
        assert assignment.categories == {"pediatrics", "communication"}

    def test_unknown_issn_queued(self, tables_dir):
        assignment = classify_venue("10.1/x", UNKNOWN_ISSN, load_tables(tables_dir))
        assert assignment.provenance == PROVENANCE_PENDING
        assert not assignment.areas and not assignment.categories


class TestIsbnRoute:
    def test_area_match_gets_miscellaneous_category(self, tables_dir):
        assignment = map_lcc("10.1/x", ISBN_AREA, load_tables(tables_dir))
        assert assignment.provenance == PROVENANCE_ISBN_AREA
        assert assignment.areas == {"medicine"}
        assert assignment.categories == {"medicine" + MISCELLANEOUS_SUFFIX}

    def test_category_match_gets_parent_area(self, tables_dir):
        assignment = map_lcc("10.1/x", ISBN_CATEGORY, load_tables(tables_dir))
        assert assignment.provenance == PROVENANCE_ISBN_CATEGORY
        assert assignment.areas == {"immunology and microbiology"}
        assert assignment.categories == {"immunology"}

    def test_unmatched_discipline_queued(self, tables_dir):
        assert map_lcc("10.1/x", ISBN_DEAD_END,
                       load_tables(tables_dir)).provenance == PROVENANCE_PENDING

    def test_unindexed_isbn_queued(self, tables_dir):
        assert map_lcc("10.1/x", ISBN_UNINDEXED,
                       load_tables(tables_dir)).provenance == PROVENANCE_PENDING


class TestClassifyVenue:
    def test_no_source_id_queued(self, tables_dir):
        assert classify_venue("10.1/x", None,
                              load_tables(tables_dir)).provenance == PROVENANCE_PENDING
        assert classify_venue("10.1/x", "  ",
                              load_tables(tables_dir)).provenance == PROVENANCE_PENDING

    def test_unrecognized_id_rejected(self, tables_dir):
        with pytest.raises(ValidationError):
            classify_venue("10.1/x", "not-an-identifier", load_tables(tables_dir))

    def test_assignment_invariant(self):
        with pytest.raises(ValidationError):
            SubjectAssignment("10.1/x", frozenset({"medicine"}), frozenset(),
                              PROVENANCE_ISSN)


class TestClassifyFile:
    def test_appends_sorted_columns(self, tables_dir, tmp_path):
        src = tmp_path / "harvest.csv"
        with open(src, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["doi", "year", "title", "source_id", "source_title",
                             "retracted"])
            writer.writerow(["10.1/a", 2001, "A", KNOWN_ISSN, "J", "no"])
            writer.writerow(["10.1/b", 2002, "B", "", "", "no"])
            writer.writerow(["10.1/c", 2003, "C", "bogus-id", "", "no"])
        out = tmp_path / "classified.csv"
        assignments = classify_file(src, tables_dir, out)
        assert [a.provenance for a in assignments] == [
            PROVENANCE_ISSN, PROVENANCE_PENDING, PROVENANCE_PENDING]
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["area"] == "medicine;social sciences"
        assert rows[0]["category"] == "communication;pediatrics"
        assert rows[1]["area"] == ""
