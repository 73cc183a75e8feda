"""HTTP service exposing the store, metric, and ranking to API clients.

Every response is an envelope ``{"ok": true, "data": ...}`` or
``{"ok": false, "error": {"code": ..., "message": ...}}`` with exactly one of
``data``/``error`` present.  Error codes mirror the typed domain errors.

Store mutations are funneled through one writer lock; GET endpoints never
write (a missing metric is computed on the fly but not persisted).
"""

from __future__ import annotations

import json
import threading

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    DanglingReference,
    DefectDepError,
    DefectExceedsProduct,
    DuplicateDefect,
    DuplicateVersion,
    EmptyConfig,
    EmptyProductModel,
    InvalidDefect,
    InvalidModel,
    InvalidPriorityConfig,
    MalformedXml,
    NotFound,
    UnknownFactorLevel,
    UnknownSeverityLevel,
    UnknownVersion,
    UnsupportedVersion,
)
from .metric import ensure_metric, recompute_all
from .prioritize import PriorityConfig
from .store import DefectReport, ModelStore
from .workflow import rank_defects

_STATUS_BY_ERROR: dict[type[DefectDepError], int] = {
    NotFound: 404,
    UnknownVersion: 404,
    DuplicateVersion: 409,
    DuplicateDefect: 409,
    InvalidModel: 422,
    InvalidDefect: 422,
    EmptyProductModel: 422,
    DefectExceedsProduct: 422,
    UnknownSeverityLevel: 422,
    UnknownFactorLevel: 422,
    EmptyConfig: 422,
    InvalidPriorityConfig: 422,
    MalformedXml: 422,
    UnsupportedVersion: 422,
    DanglingReference: 422,
}


def _data(payload, status_code: int = 200) -> JSONResponse:
    return JSONResponse({"ok": True, "data": payload}, status_code=status_code)


def _error(code: str, message: str, status_code: int) -> JSONResponse:
    return JSONResponse(
        {"ok": False, "error": {"code": code, "message": message}}, status_code=status_code
    )


def _usage(message: str) -> JSONResponse:
    return _error("usage", message, 400)


def create_app(store_root: str, *, ui_dir: str | None = None) -> FastAPI:
    store = ModelStore(store_root)
    write_lock = threading.Lock()
    app = FastAPI(title="defectdep", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(DefectDepError)
    async def _domain_error(_request: Request, exc: DefectDepError):
        return _error(exc.code, exc.message, _STATUS_BY_ERROR.get(type(exc), 422))

    @app.get("/api/health")
    def health():
        return _data({"status": "ok"})

    @app.get("/api/versions")
    def versions():
        return _data({"versions": [entry.to_record() for entry in store.list_versions()]})

    @app.post("/api/models")
    async def put_model(request: Request, version: str = ""):
        if not version:
            return _usage("query parameter 'version' is required")
        content_type = request.headers.get("content-type", "")
        if content_type and "xml" not in content_type and "octet-stream" not in content_type:
            return _usage(f"expected an XML body, got content type {content_type!r}")
        body = await request.body()
        if not body:
            return _usage("request body must contain an istarml document")
        with write_lock:
            entry = store.put_model(body, version)
        return _data(entry.to_record(), status_code=201)

    @app.get("/api/models/{version}/counts")
    def model_counts(version: str):
        for entry in store.list_versions():
            if entry.version == version:
                return _data(entry.counts.as_dict())
        raise NotFound(f"model version {version!r} not in store")

    @app.get("/api/defects")
    def list_defects(status: str | None = None):
        return _data({"defects": [d.to_record() for d in store.list_defects(status)]})

    @app.post("/api/defects")
    async def put_defect(request: Request):
        try:
            record = await request.json()
        except json.JSONDecodeError as exc:
            return _usage(f"request body must be a JSON defect report: {exc}")
        if not isinstance(record, dict) or "defect_id" not in record:
            return _usage("defect report must be a JSON object with a defect_id")
        with write_lock:
            stored = store.put_defect(DefectReport.from_record(record))
        return _data(stored.to_record(), status_code=201)

    @app.get("/api/defects/{defect_id}/metric")
    def defect_metric(defect_id: str, version: str = ""):
        version = version or _latest(store)
        result = ensure_metric(store, defect_id, version, persist=False)
        return _data(result.to_record())

    @app.post("/api/recompute")
    def recompute(version: str = ""):
        if not version:
            return _usage("query parameter 'version' is required")
        with write_lock:
            entries = recompute_all(store, version)
        return _data(
            {
                "version": version,
                "entries": [
                    {
                        "defect_id": e.defect_id,
                        "result": e.result.to_record() if e.result else None,
                        "previous": e.previous.to_record() if e.previous else None,
                        "unknown_seeds": list(e.unknown_seeds),
                        "error": e.error,
                    }
                    for e in entries
                ],
            }
        )

    @app.post("/api/rank")
    async def rank(request: Request):
        body = await request.body()
        if body:
            try:
                payload = json.loads(body)
            except json.JSONDecodeError as exc:
                return _usage(f"rank body must be JSON: {exc}")
            if not isinstance(payload, dict):
                return _usage("rank body must be a JSON object")
        else:
            payload = {}
        version = payload.get("version") or _latest(store)
        status = payload.get("status", "open")
        config = _merged_config(store, payload.get("config") or {})
        with write_lock:
            rows = rank_defects(store, version, config, status=status)
        return _data({"version": version, "rows": [row.to_record() for row in rows]})

    @app.get("/api/config/priority")
    def get_config():
        return _data(store.load_priority_config().to_dict())

    @app.put("/api/config/priority")
    async def put_config(request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError as exc:
            return _usage(f"config body must be JSON: {exc}")
        if not isinstance(payload, dict):
            return _usage("config body must be a JSON object")
        config = _merged_config(store, payload)
        with write_lock:
            store.save_priority_config(config)
        return _data(config.to_dict())

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _latest(store: ModelStore) -> str:
    versions = store.list_versions()
    if not versions:
        raise NotFound("store has no product model versions")
    return versions[-1].version


def _merged_config(store: ModelStore, override: dict) -> PriorityConfig:
    """Request override merged over the stored config (dict keys merge per entry)."""
    base = store.load_priority_config().to_dict()
    merged = dict(base)
    for key, value in override.items():
        if key in ("factor_weights", "factor_scales") and isinstance(value, dict):
            merged[key] = {**base.get(key, {}), **value}
        else:
            merged[key] = value
    return PriorityConfig.from_dict(merged)
