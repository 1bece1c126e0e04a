"""Local HTTP service for the human-in-the-loop workflows.

Backs two queues: curation (accept/reject a candidate seed) and calibration
(five-dimension scoring of model outputs by multiple annotators). State is
an append-only JSONL store per kind; replaying the log reconstructs the
service exactly. Submissions are idempotent per (item, annotator).
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Query, Response
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .grid import ArtError, AsciiArt, normalize
from .judge import DIMENSIONS
from .render import RenderConfig, render_png
from .util import clamp01, read_jsonl

KIND_CURATION = "curation"
KIND_CALIBRATION = "calibration"
KINDS = (KIND_CURATION, KIND_CALIBRATION)

REQUIRED_ANNOTATORS = 3


class NoAnnotations(LookupError):
    pass


@dataclass(frozen=True)
class AnnotationItem:
    id: str
    kind: str
    art: AsciiArt
    context: str
    candidate: str | None = None


def load_queue(kind: str, path: str | Path) -> list[AnnotationItem]:
    """Read one queue file; calibration items must carry the scored candidate."""
    items = []
    for lineno, obj in read_jsonl(path):
        try:
            art = normalize(AsciiArt.from_text(str(obj["art"])))
        except (KeyError, ArtError) as exc:
            raise ValueError(f"{path}:{lineno}: bad item art: {exc}") from exc
        candidate = obj.get("candidate")
        if kind == KIND_CALIBRATION and not candidate:
            raise ValueError(f"{path}:{lineno}: calibration item missing candidate")
        items.append(
            AnnotationItem(
                id=str(obj["id"]),
                kind=kind,
                art=art,
                context=str(obj.get("context", "")),
                candidate=candidate,
            )
        )
    return items


class AnnotationStore:
    """In-memory annotation state mirrored to per-kind JSONL logs."""

    def __init__(self, items: list[AnnotationItem], store_paths: dict[str, Path]):
        self.items: dict[str, AnnotationItem] = {item.id: item for item in items}
        self.store_paths = {k: Path(p) for k, p in store_paths.items()}
        self.annotations: dict[tuple[str, str], dict] = {}
        self._lock = threading.Lock()
        for kind, path in self.store_paths.items():
            if path.exists():
                for _, obj in read_jsonl(path):
                    key = (str(obj["item_id"]), str(obj["annotator"]))
                    self.annotations.setdefault(key, obj)

    def pending(self, kind: str, annotator: str) -> list[AnnotationItem]:
        return [
            item
            for item in self.items.values()
            if item.kind == kind and (item.id, annotator) not in self.annotations
        ]

    def submit(self, item_id: str, annotator: str, payload: dict) -> tuple[dict, bool]:
        """Record one annotation; duplicates return the stored record unchanged."""
        item = self.items.get(item_id)
        if item is None:
            raise KeyError(item_id)
        key = (item_id, annotator)
        with self._lock:
            if key in self.annotations:
                return self.annotations[key], False
            record = {
                "item_id": item_id,
                "annotator": annotator,
                "kind": item.kind,
                "ts": time.time(),
                **payload,
            }
            path = self.store_paths[item.kind]
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            self.annotations[key] = record
            return record, True

    def annotations_for(self, item_id: str) -> list[dict]:
        return [rec for (iid, _), rec in sorted(self.annotations.items()) if iid == item_id]

    def aggregate(self, item_id: str) -> dict:
        """Calibration: per-dimension mean (flagged until 3 annotators).
        Curation: majority accept, ties reject."""
        item = self.items.get(item_id)
        if item is None:
            raise KeyError(item_id)
        records = self.annotations_for(item_id)
        if not records:
            raise NoAnnotations(item_id)
        if item.kind == KIND_CALIBRATION:
            means = {
                dim: sum(rec["scores"][dim] for rec in records) / len(records)
                for dim in DIMENSIONS
            }
            return {
                "id": item_id,
                "n": len(records),
                "complete": len(records) >= REQUIRED_ANNOTATORS,
                "means": means,
            }
        accepts = sum(1 for rec in records if rec["accept"])
        return {
            "id": item_id,
            "n": len(records),
            "accepted": accepts * 2 > len(records),
        }

    def export(self, kind: str) -> dict:
        ids = sorted(
            item.id
            for item in self.items.values()
            if item.kind == kind and self.annotations_for(item.id)
        )
        if kind == KIND_CALIBRATION:
            return {"kind": kind, "items": [self.aggregate(i) for i in ids]}
        accepted, rejected = [], []
        for item_id in ids:
            (accepted if self.aggregate(item_id)["accepted"] else rejected).append(item_id)
        return {"kind": kind, "accepted": accepted, "rejected": rejected}


class SubmissionBody(BaseModel):
    accept: bool | None = None
    reason: str = ""
    scores: dict[str, float] | None = None


def _item_view(item: AnnotationItem) -> dict:
    view = {
        "id": item.id,
        "kind": item.kind,
        "art": item.art.text,
        "context": item.context,
    }
    if item.candidate is not None:
        view["candidate"] = item.candidate
    return view


def create_app(store: AnnotationStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="asciikit annotation service")

    @app.get("/items")
    def list_items(
        kind: str = Query(...),
        annotator: str = Query(...),
    ):
        if kind not in KINDS:
            raise HTTPException(status_code=400, detail=f"unknown kind {kind!r}")
        pending = sorted(store.pending(kind, annotator), key=lambda i: i.id)
        return {"pending": [_item_view(i) for i in pending], "count": len(pending)}

    @app.get("/items/{item_id}/render")
    def render_item(item_id: str, cell_width: int = 8, cell_height: int = 16):
        item = store.items.get(item_id)
        if item is None:
            raise HTTPException(status_code=404, detail="no such item")
        png = render_png(item.art, RenderConfig(cell_width, cell_height))
        return Response(content=png, media_type="image/png")

    @app.post("/items/{item_id}/annotations")
    def submit(
        item_id: str,
        body: SubmissionBody,
        x_annotator_id: str = Header(...),
    ):
        item = store.items.get(item_id)
        if item is None:
            raise HTTPException(status_code=404, detail="no such item")
        if item.kind == KIND_CALIBRATION:
            if not body.scores:
                raise HTTPException(status_code=422, detail="calibration needs scores")
            missing = [d for d in DIMENSIONS if d not in body.scores]
            if missing:
                raise HTTPException(
                    status_code=422, detail=f"missing dimensions: {', '.join(missing)}"
                )
            payload = {"scores": {d: clamp01(body.scores[d]) for d in DIMENSIONS}}
        else:
            if body.accept is None:
                raise HTTPException(status_code=422, detail="curation needs accept flag")
            payload = {"accept": body.accept, "reason": body.reason}
        record, created = store.submit(item_id, x_annotator_id, payload)
        return {"annotation": record, "duplicate": not created}

    @app.get("/export")
    def export(kind: str = Query(...)):
        if kind not in KINDS:
            raise HTTPException(status_code=400, detail=f"unknown kind {kind!r}")
        return store.export(kind)

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "items": len(store.items)}

    if static_dir is not None and Path(static_dir).is_dir():
        @app.get("/")
        def index():
            return RedirectResponse(url="/ui/")

        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
