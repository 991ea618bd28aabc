"""HTTP collection service: serves the probe page, harness and wasm
modules, ingests fingerprint submissions, and matches stored records
against a loaded fingerprint database.

Responses carry cross-origin isolation headers so browsers grant the probe
the finest timer resolution they offer.
"""

from __future__ import annotations

import json
import math
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import HTMLResponse, JSONResponse

from .classifier import ClassifierConfig, classify_fingerprint
from .matching import (
    SimilarityModel,
    fit_model,
    load_database,
    nearest_euclidean,
    nearest_mahalanobis,
    nearest_pca,
)
from .store import RecordStore
from .wasmgen import catalog, emit_module, manifest, test_names

N_TESTS = 20


@dataclass
class ServiceConfig:
    store_path: Path
    thresholds: ClassifierConfig = field(default_factory=ClassifierConfig)
    model_path: Path | None = None
    pca_k: int | None = None
    harness_path: Path | None = None
    fsync: bool = False


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def _load_model(config: ServiceConfig) -> SimilarityModel | None:
    if config.model_path is None:
        return None
    db = load_database(config.model_path)
    return fit_model(db, pca_k=config.pca_k)


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="wasmfp collection service")
    store = RecordStore(config.store_path, fsync=config.fsync)
    sim = _load_model(config)
    expected_names = list(test_names())

    @app.middleware("http")
    async def isolation_headers(request: Request, call_next):
        response = await call_next(request)
        response.headers["Cross-Origin-Opener-Policy"] = "same-origin"
        response.headers["Cross-Origin-Embedder-Policy"] = "require-corp"
        return response

    @app.get("/", response_class=HTMLResponse)
    def index():
        if config.harness_path is not None and not Path(config.harness_path).is_file():
            return _error(500, f"harness asset missing: {config.harness_path}")
        template = resources.files("wasmfp.assets").joinpath("probe.html") \
            .read_text(encoding="utf-8")
        return HTMLResponse(template.replace("__SESSION__", uuid.uuid4().hex))

    @app.get("/harness.js")
    def harness():
        if config.harness_path is not None:
            path = Path(config.harness_path)
            if not path.is_file():
                return _error(500, f"harness asset missing: {path}")
            body = path.read_text(encoding="utf-8")
        else:
            body = resources.files("wasmfp.assets").joinpath("harness_stub.js") \
                .read_text(encoding="utf-8")
        return Response(content=body, media_type="application/javascript")

    @app.get("/manifest.json")
    def serve_manifest():
        return {"tests": manifest()}

    @app.get("/wasm/{test_id}")
    def wasm_module(test_id: int):
        if not 1 <= test_id <= len(catalog()):
            return _error(404, f"no such test: {test_id}")
        blob = emit_module(test_id)
        return Response(content=blob.bytes, media_type="application/wasm")

    @app.post("/api/fingerprint")
    async def ingest(request: Request):
        raw = await request.body()
        try:
            body = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError):
            return _error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(422, "request body must be a JSON object")

        timings = body.get("timings_ms")
        if not isinstance(timings, list) or len(timings) != N_TESTS:
            got = len(timings) if isinstance(timings, list) else type(timings).__name__
            return _error(422, f"timings_ms must have {N_TESTS} entries, got {got}")
        values = []
        for v in timings:
            if isinstance(v, bool) or not isinstance(v, (int, float)) \
                    or not math.isfinite(v) or v < 0:
                return _error(422, f"timings_ms entries must be finite non-negative numbers, got {v!r}")
            values.append(float(v))

        names = body.get("test_names")
        if names is not None and list(names) != expected_names:
            return _error(422, "test_names do not match the catalog order")

        try:
            verdict = classify_fingerprint(values, config.thresholds).to_dict()
        except ValueError:
            verdict = None  # e.g. zero getter baseline; store without verdict

        record = {
            "id": uuid.uuid4().hex,
            "received_at": datetime.now(timezone.utc).isoformat(),
            "session": str(body.get("session", "")),
            "test_names": expected_names,
            "timings_ms": values,
            "user_agent": str(body.get("user_agent", "")),
            "client_hint": body.get("client_hint"),
            "verdict": verdict,
        }
        try:
            store.append(record)
        except OSError as exc:
            return _error(503, f"store write failed: {exc}")
        return JSONResponse(status_code=201, content={"id": record["id"]})

    @app.get("/api/fingerprints")
    def list_records():
        return {"records": store.records()}

    @app.get("/api/fingerprints/{record_id}")
    def get_record(record_id: str):
        record = store.get(record_id)
        if record is None:
            return _error(404, f"no such record: {record_id}")
        return record

    @app.get("/api/fingerprints/{record_id}/match")
    def match_record(record_id: str, model: str = "euclidean"):
        record = store.get(record_id)
        if record is None:
            return _error(404, f"no such record: {record_id}")
        if sim is None:
            return _error(409, "no similarity model loaded")
        query = record["timings_ms"]
        if model == "euclidean":
            index, distance = nearest_euclidean(query, sim.database)
        elif model == "mahalanobis":
            index, distance = nearest_mahalanobis(query, sim)
        elif model == "pca":
            if sim.pca_basis is None:
                return _error(409, "no PCA basis fitted on the loaded model")
            index, distance = nearest_pca(query, sim)
        else:
            return _error(422, f"unknown model: {model}")
        return {
            "record_id": record_id,
            "model": model,
            "index": index,
            "label": sim.database.labels[index],
            "distance": distance,
        }

    return app
