import io
import json

import pytest
from fastapi.testclient import TestClient
from PIL import Image

from asciikit.service import (
    KIND_CALIBRATION,
    KIND_CURATION,
    AnnotationStore,
    NoAnnotations,
    create_app,
    load_queue,
)

CURATION_ITEMS = [
    {"id": "c1", "art": "/\\\n\\/\n/\\", "context": "a zigzag"},
    {"id": "c2", "art": "##\n##\n##", "context": "a block"},
]
CALIBRATION_ITEMS = [
    {"id": "k1", "art": "abc\ndef", "context": "letters",
     "candidate": "<art>\nabc\ndef\n</art>"},
]

SCORES = {"SA": 0.2, "IF": 0.2, "SC": 0.2, "SL": 0.2, "CE": 0.2}


@pytest.fixture
def store(tmp_path):
    cur_q = tmp_path / "curation.jsonl"
    cal_q = tmp_path / "calibration.jsonl"
    with open(cur_q, "w") as fh:
        for item in CURATION_ITEMS:
            fh.write(json.dumps(item) + "\n")
    with open(cal_q, "w") as fh:
        for item in CALIBRATION_ITEMS:
            fh.write(json.dumps(item) + "\n")
    items = load_queue(KIND_CURATION, cur_q) + load_queue(KIND_CALIBRATION, cal_q)
    paths = {
        KIND_CURATION: tmp_path / "curation.annotations",
        KIND_CALIBRATION: tmp_path / "calibration.annotations",
    }
    return AnnotationStore(items, paths)


@pytest.fixture
def client(store):
    return TestClient(create_app(store))


def submit(client, item_id, annotator, **payload):
    return client.post(
        f"/items/{item_id}/annotations",
        json=payload,
        headers={"X-Annotator-Id": annotator},
    )


class TestQueue:
    def test_pending_lists_unannotated(self, client):
        body = client.get("/items", params={"kind": "curation", "annotator": "ann1"}).json()
        assert body["count"] == 2
        assert [i["id"] for i in body["pending"]] == ["c1", "c2"]

    def test_pending_shrinks_after_submit(self, client):
        submit(client, "c1", "ann1", accept=True)
        body = client.get("/items", params={"kind": "curation", "annotator": "ann1"}).json()
        assert [i["id"] for i in body["pending"]] == ["c2"]
        other = client.get("/items", params={"kind": "curation", "annotator": "ann2"}).json()
        assert other["count"] == 2

    def test_calibration_item_carries_candidate(self, client):
        body = client.get("/items", params={"kind": "calibration", "annotator": "a"}).json()
        assert body["pending"][0]["candidate"].startswith("<art>")

    def test_unknown_kind(self, client):
        assert client.get("/items", params={"kind": "x", "annotator": "a"}).status_code == 400


class TestRender:
    def test_png_dimensions(self, client):
        # 3x2 art at default 8x16 cells: 24x32 pixels
        response = client.get("/items/k1/render")
        assert response.status_code == 200
        assert response.headers["content-type"] == "image/png"
        image = Image.open(io.BytesIO(response.content))
        assert image.size == (24, 32)

    def test_custom_cell_size(self, client):
        response = client.get("/items/k1/render", params={"cell_width": 4, "cell_height": 8})
        image = Image.open(io.BytesIO(response.content))
        assert image.size == (12, 16)

    def test_missing_item(self, client):
        assert client.get("/items/zzz/render").status_code == 404


class TestSubmission:
    def test_idempotent_duplicate(self, store, client):
        first = submit(client, "c1", "ann1", accept=True, reason="clean")
        assert first.status_code == 200 and not first.json()["duplicate"]
        second = submit(client, "c1", "ann1", accept=False, reason="changed my mind")
        assert second.json()["duplicate"]
        # stored record is the first one; the file has exactly one line
        assert second.json()["annotation"]["accept"] is True
        lines = store.store_paths[KIND_CURATION].read_text().splitlines()
        assert len(lines) == 1

    def test_score_validation(self, client):
        response = submit(client, "k1", "ann1", scores={"SA": 0.5})
        assert response.status_code == 422

    def test_scores_clamped(self, client):
        response = submit(client, "k1", "ann1", scores={**SCORES, "SA": 1.7})
        assert response.json()["annotation"]["scores"]["SA"] == 1.0

    def test_curation_needs_flag(self, client):
        assert submit(client, "c1", "ann1").status_code == 422

    def test_missing_annotator_header(self, client):
        response = client.post("/items/c1/annotations", json={"accept": True})
        assert response.status_code == 422


class TestAggregation:
    def test_calibration_mean(self, client):
        for annotator, value in (("a1", 0.2), ("a2", 0.4), ("a3", 0.6)):
            scores = {d: value for d in SCORES}
            submit(client, "k1", annotator, scores=scores)
        export = client.get("/export", params={"kind": "calibration"}).json()
        item = export["items"][0]
        assert item["complete"] and item["n"] == 3
        for dim in SCORES:
            assert item["means"][dim] == pytest.approx(0.4)

    def test_incomplete_until_three(self, client):
        submit(client, "k1", "a1", scores=SCORES)
        export = client.get("/export", params={"kind": "calibration"}).json()
        assert not export["items"][0]["complete"]

    def test_majority_accept(self, client):
        for annotator, accept in (("a1", True), ("a2", True), ("a3", False)):
            submit(client, "c1", annotator, accept=accept)
        export = client.get("/export", params={"kind": "curation"}).json()
        assert "c1" in export["accepted"]

    def test_tie_rejects(self, client):
        submit(client, "c1", "a1", accept=True)
        submit(client, "c1", "a2", accept=False)
        export = client.get("/export", params={"kind": "curation"}).json()
        assert "c1" in export["rejected"]

    def test_unannotated_items_not_exported(self, client):
        export = client.get("/export", params={"kind": "curation"}).json()
        assert export["accepted"] == [] and export["rejected"] == []

    def test_no_annotations_error(self, store):
        with pytest.raises(NoAnnotations):
            store.aggregate("c1")


class TestReplay:
    def test_log_replay_reconstructs_state(self, store, client):
        submit(client, "c1", "a1", accept=True)
        submit(client, "c1", "a2", accept=False)
        submit(client, "k1", "a1", scores=SCORES)
        reloaded = AnnotationStore(list(store.items.values()), store.store_paths)
        assert reloaded.export("curation") == store.export("curation")
        assert reloaded.export("calibration") == store.export("calibration")
        assert len(reloaded.annotations) == 3
