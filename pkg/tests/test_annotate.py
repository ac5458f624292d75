from __future__ import annotations

import csv
import json

import pytest

from retrace.annotate import (
    Annotation,
    AnnotationStore,
    DecisionGrid,
    GridEntry,
    detect_retraction_mention,
    export_annotations_csv,
    load_decision_grid,
    priority,
    read_annotations_csv,
    resolve_intent,
    roll_up_entity_mention,
)
from retrace.errors import ConflictError, ValidationError


class TestDecisionGrid:
    def test_loads_bundled_grid(self, grid):
        assert len(grid.functions()) >= 39

    def test_worked_priorities(self, grid):
        assert priority("confirms", grid) == 11.2
        assert priority("describes", grid) == 43.2
        assert priority("retracts", grid) == 24.2

    def test_unknown_function(self, grid):
        with pytest.raises(ValidationError):
            priority("frobnicates", grid)

    def test_macro_categories_cover_grid(self, grid):
        macros = {e.macro for e in grid.entries}
        assert macros == {"reviewing", "affecting", "referring"}

    def test_validation_rejects_duplicate_cells(self):
        entry = GridEntry("supports", "reviewing", 1, 10, 0.1)
        clone = GridEntry("confirms", "reviewing", 1, 10, 0.1)
        with pytest.raises(ValidationError):
            DecisionGrid((entry, clone))

    def test_validation_rejects_bad_scores(self):
        with pytest.raises(ValidationError):
            DecisionGrid((GridEntry("x", "reviewing", 9, 10, 0.1),))
        with pytest.raises(ValidationError):
            DecisionGrid((GridEntry("x", "reviewing", 1, 15, 0.1),))
        with pytest.raises(ValidationError):
            DecisionGrid((GridEntry("x", "nonsense", 1, 10, 0.1),))


class TestResolveIntent:
    def test_min_priority_wins(self, grid):
        assert resolve_intent({"confirms", "describes"}, grid) == "confirms"
        assert resolve_intent(["describes", "retracts", "confirms"], grid) == "confirms"

    def test_singleton(self, grid):
        assert resolve_intent({"discusses"}, grid) == "discusses"

    def test_empty_rejected(self, grid):
        with pytest.raises(ValidationError):
            resolve_intent(set(), grid)

    def test_unknown_candidate_rejected(self, grid):
        with pytest.raises(ValidationError):
            resolve_intent({"confirms", "frobnicates"}, grid)


class TestMentionDetector:
    def test_case_insensitive_prefix(self):
        assert detect_retraction_mention("the paper was RETRACTED")
        assert detect_retraction_mention("a retraction notice")
        assert not detect_retraction_mention("the tractor broke")
        assert not detect_retraction_mention("a protracted affair")

    def test_roll_up(self):
        assert roll_up_entity_mention(["nothing", "it was retracted"])
        assert not roll_up_entity_mention(["nothing", "still nothing"])
        assert not roll_up_entity_mention([])


def make_annotation(doi="10.1/a", idx=0, intent="discusses", version=1,
                    sentiment="neutral"):
    return Annotation(doi, idx, intent, sentiment, False, "tester", version)


class TestAnnotationModel:
    def test_sentiment_validated(self):
        with pytest.raises(ValidationError):
            make_annotation(sentiment="ambivalent")

    def test_version_starts_at_one(self):
        with pytest.raises(ValidationError):
            make_annotation(version=0)


class TestAnnotationStore:
    def test_versioned_writes_and_history(self, tmp_path):
        store = AnnotationStore(tmp_path / "log")
        assert store.record(make_annotation(version=1)) == 1
        assert store.record(make_annotation(version=2, intent="disputes")) == 2
        assert store.latest("10.1/a", 0).intent == "disputes"
        assert [a.version for a in store.history()] == [1, 2]

    def test_stale_write_conflicts(self, tmp_path):
        store = AnnotationStore(tmp_path / "log")
        store.record(make_annotation(version=1))
        with pytest.raises(ConflictError) as err:
            store.record(make_annotation(version=1, intent="disputes"))
        assert err.value.current_version == 1
        with pytest.raises(ConflictError):
            store.record(make_annotation(version=3))

    def test_first_write_must_be_version_one(self, tmp_path):
        store = AnnotationStore(tmp_path / "log")
        with pytest.raises(ConflictError) as err:
            store.record(make_annotation(version=2))
        assert err.value.current_version == 0

    def test_intent_must_be_in_grid(self, tmp_path):
        store = AnnotationStore(tmp_path / "log")
        with pytest.raises(ValidationError):
            store.record(make_annotation(intent="frobnicates"))

    def test_replay_from_disk(self, tmp_path):
        path = tmp_path / "log"
        store = AnnotationStore(path)
        store.record(make_annotation(version=1))
        store.record(make_annotation(version=2, intent="credits"))
        store.record(make_annotation(doi="10.1/b", version=1))
        reopened = AnnotationStore(path)
        assert reopened.latest("10.1/a", 0).intent == "credits"
        assert len(reopened.current_state()) == 2
        assert len(reopened.history()) == 3

    def test_log_is_append_only_json_lines(self, tmp_path):
        path = tmp_path / "log"
        store = AnnotationStore(path)
        store.record(make_annotation(version=1))
        store.record(make_annotation(version=2))
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert json.loads(lines[0])["version"] == 1


class TestCsvExport:
    def test_export_and_read_roundtrip(self, tmp_path):
        store = AnnotationStore(tmp_path / "log")
        store.record(make_annotation(version=1))
        store.record(Annotation("10.1/b", 1, "disputes", "negative", True,
                                "tester", 1))
        out = tmp_path / "annotated.csv"
        export_annotations_csv(store, out)
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert rows[1]["retraction_mentioned"] == "yes"
        loaded = read_annotations_csv(out)
        assert loaded[0] == {"doi": "10.1/a", "pointer_index": 0,
                             "intent": "discusses", "sentiment": "neutral",
                             "retraction_mentioned": False}
        assert loaded[1]["retraction_mentioned"] is True
