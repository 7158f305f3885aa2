"""HTTP JSON API for browsing, annotating, and model-assisted labeling.

Endpoints (JSON bodies, UTF-8):

- GET  /api/samples                paged summaries, filterable
- GET  /api/samples/{id}           detail with version token and PNG URL
- GET  /api/samples/{id}/image     the PNG itself
- PUT  /api/samples/{id}/annotation  optimistic-concurrency label write
- GET  /api/stats/class-histogram
- GET  /api/models                 loadable checkpoints
- POST /api/predict                top-k suggestions for a sample or upload

Errors are ``{"error": code, "message": text}`` with a 4xx status.
A static UI bundle, when provided, is mounted at ``/``.
"""

import base64
import io
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import (
    BadImage,
    BadPageParams,
    ConflictingWrite,
    DataError,
    MalformedIndex,
    UnknownModel,
    UnknownSample,
)
from ..dataset import format_index, load_png
from ..nn import load_checkpoint, predict_proba
from .store import ManifestStore, version_token

MAX_PAGE_SIZE = 200

_ERROR_STATUS = {
    "unknown_sample": 404,
    "unknown_model": 404,
    "malformed_index": 400,
    "bad_image": 400,
    "bad_page_params": 400,
    "conflicting_write": 409,
    "data_error": 400,
}

_ERROR_CODES = [
    (UnknownSample, "unknown_sample"),
    (UnknownModel, "unknown_model"),
    (MalformedIndex, "malformed_index"),
    (BadImage, "bad_image"),
    (BadPageParams, "bad_page_params"),
    (ConflictingWrite, "conflicting_write"),
    (DataError, "data_error"),
]


class AnnotationBody(BaseModel):
    character: str
    index: str
    editor: str = ""
    version: str


class PredictBody(BaseModel):
    model: str
    sample_id: str | None = None
    image_b64: str | None = None
    k: int = 5


class ModelRegistry:
    """Lazily loads checkpoints; keeps at most one per architecture."""

    def __init__(self, models_dir):
        self.models_dir = Path(models_dir) if models_dir else None
        self._by_arch = {}

    def available(self) -> list:
        if self.models_dir is None or not self.models_dir.is_dir():
            return []
        return sorted(p.stem for p in self.models_dir.glob("*.ckpt"))

    def load(self, model_id: str):
        if self.models_dir is None:
            raise UnknownModel("no models directory configured")
        for cached_id, cached in self._by_arch.values():
            if cached_id == model_id:
                return cached
        path = self.models_dir / f"{model_id}.ckpt"
        if not path.is_file():
            raise UnknownModel(f"no checkpoint named {model_id!r}")
        trained = load_checkpoint(path)
        # one resident model per architecture: same-arch entries are evicted
        self._by_arch[trained.config.arch_id] = (model_id, trained)
        return trained


def _sample_payload(store: ManifestStore, sample, detail: bool = False) -> dict:
    payload = {
        "id": sample.id,
        "character": sample.character,
        "index": format_index(sample.index),
        "split": sample.split,
        "labeled": sample.labeled,
        "version": version_token(sample),
        "image_url": f"/api/samples/{sample.id}/image",
    }
    if detail:
        payload["image_path"] = sample.image_path
    return payload


def create_app(manifest_path, models_dir=None, ui_dir=None) -> FastAPI:
    store = ManifestStore(manifest_path)
    registry = ModelRegistry(models_dir)
    app = FastAPI(title="glyphforge annotation service")
    app.state.store = store

    for exc_type, code in _ERROR_CODES:
        def handler(request: Request, exc, code=code):
            return JSONResponse(
                status_code=_ERROR_STATUS[code],
                content={"error": code, "message": str(exc)},
            )

        app.add_exception_handler(exc_type, handler)

    @app.get("/api/samples")
    def list_samples(
        character: str | None = None,
        unlabeled: bool | None = None,
        page: int = 1,
        page_size: int = 50,
    ):
        if page < 1 or page_size < 1:
            raise BadPageParams("page and page_size must be >= 1")
        page_size = min(page_size, MAX_PAGE_SIZE)
        matched = store.list_samples(character=character, unlabeled=unlabeled)
        start = (page - 1) * page_size
        items = matched[start : start + page_size]
        return {
            "total": len(matched),
            "page": page,
            "page_size": page_size,
            "items": [_sample_payload(store, s) for s in items],
        }

    @app.get("/api/samples/{sample_id}")
    def get_sample(sample_id: str):
        return _sample_payload(store, store.get(sample_id), detail=True)

    @app.get("/api/samples/{sample_id}/image")
    def get_image(sample_id: str):
        sample = store.get(sample_id)
        return FileResponse(store.manifest.resolve(sample), media_type="image/png")

    @app.put("/api/samples/{sample_id}/annotation")
    def annotate(sample_id: str, body: AnnotationBody):
        updated = store.annotate(
            sample_id,
            character=body.character,
            index_str=body.index,
            editor=body.editor,
            version=body.version,
        )
        return _sample_payload(store, updated, detail=True)

    @app.get("/api/stats/class-histogram")
    def histogram():
        return store.histogram().as_dict()

    @app.get("/api/models")
    def models():
        return {"models": registry.available()}

    @app.post("/api/predict")
    def predict(body: PredictBody):
        trained = registry.load(body.model)
        if body.sample_id is not None:
            sample = store.get(body.sample_id)
            img = load_png(store.manifest.resolve(sample))
        elif body.image_b64 is not None:
            try:
                raw = base64.b64decode(body.image_b64)
                from PIL import Image

                with Image.open(io.BytesIO(raw)) as im:
                    img = np.asarray(im.convert("L"), dtype=np.float64) / 255.0
            except Exception as exc:
                raise BadImage(f"cannot decode uploaded image: {exc}") from exc
        else:
            raise BadImage("provide sample_id or image_b64")
        probs = predict_proba(trained, img)
        k = max(1, min(body.k, probs.size))
        order = np.argsort(-probs, kind="stable")[:k]
        return {
            "model": body.model,
            "predictions": [
                {"character": trained.classes[i], "probability": float(probs[i])} for i in order
            ],
        }

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
