from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from retrace.annotate import AnnotationStore
from retrace.extract import InTextCitation
from retrace.service import create_app


@pytest.fixture
def citations():
    return [
        InTextCitation("10.1/a", "[3]", "claim [3] was later retracted",
                       "introduction", "Introduction"),
        InTextCitation("10.1/a", "[3]", "again [3] cited", "discussion",
                       "Discussion"),
        InTextCitation("10.1/b", "[3]", "plain [3] mention", "none", None),
    ]


@pytest.fixture
def client(citations, tmp_path):
    store = AnnotationStore(tmp_path / "log")
    app = create_app(citations, store)
    return TestClient(app)


def annotation_payload(doi="10.1/a", idx=0, version=1, intent="discusses"):
    return {"doi": doi, "pointer_index": idx, "intent": intent,
            "sentiment": "neutral", "retraction_mentioned": False,
            "annotator": "tester", "version": version}


class TestGrid:
    def test_grid_served_with_scores(self, client):
        body = client.get("/grid").json()
        entries = {e["function"]: e for e in body["entries"]}
        assert len(entries) >= 39
        confirms = entries["confirms"]
        assert confirms["row_score"] + confirms["column_score"] + \
            confirms["inner_value"] == pytest.approx(11.2)


class TestScore:
    def test_priorities_and_resolution(self, client):
        body = client.post("/score", json={
            "candidates": ["confirms", "describes"]}).json()
        assert body["priorities"] == {"confirms": 11.2, "describes": 43.2}
        assert body["resolved"] == "confirms"

    def test_unknown_candidate_422(self, client):
        assert client.post("/score", json={
            "candidates": ["frobnicates"]}).status_code == 422

    def test_empty_candidates_422(self, client):
        assert client.post("/score", json={"candidates": []}).status_code == 422


class TestQueueAndProgress:
    def test_queue_walks_unannotated_citations(self, client):
        first = client.get("/queue").json()
        assert (first["doi"], first["pointer_index"]) == ("10.1/a", 0)
        assert first["suggestion"]["retraction_mentioned"] is True
        assert first["progress"] == {"total": 3, "annotated": 0, "remaining": 3}

        assert client.post("/annotations",
                           json=annotation_payload()).status_code == 200
        second = client.get("/queue").json()
        assert (second["doi"], second["pointer_index"]) == ("10.1/a", 1)
        assert second["suggestion"]["retraction_mentioned"] is False

    def test_done_marker(self, client, citations):
        for doi, idx in [("10.1/a", 0), ("10.1/a", 1), ("10.1/b", 0)]:
            client.post("/annotations", json=annotation_payload(doi, idx))
        body = client.get("/queue").json()
        assert body["done"] is True
        assert body["progress"]["remaining"] == 0

    def test_progress_endpoint(self, client):
        client.post("/annotations", json=annotation_payload())
        assert client.get("/progress").json() == {
            "total": 3, "annotated": 1, "remaining": 2}


class TestAnnotationWrites:
    def test_conflict_returns_409_with_current_version(self, client):
        assert client.post("/annotations",
                           json=annotation_payload(version=1)).status_code == 200
        resp = client.post("/annotations", json=annotation_payload(version=1))
        assert resp.status_code == 409
        assert resp.json()["detail"]["current_version"] == 1

    def test_revision_accepted(self, client):
        client.post("/annotations", json=annotation_payload(version=1))
        resp = client.post("/annotations",
                           json=annotation_payload(version=2, intent="disputes"))
        assert resp.status_code == 200
        assert resp.json()["version"] == 2

    def test_invalid_intent_422(self, client):
        assert client.post("/annotations", json=annotation_payload(
            intent="frobnicates")).status_code == 422
