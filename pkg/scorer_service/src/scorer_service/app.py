"""The HTTP face of the scorer: /v1/score and /v1/health.

Request validation is done by hand rather than through response-model
magic so malformed input maps to a plain 400 (the wire contract) instead
of a framework-specific 422.
"""

from __future__ import annotations

import logging
import threading
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .config import ServiceConfig
from .model import Model, build_model, softmax3

logger = logging.getLogger("scorer_service")

_BUILD_DEFAULT = object()


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def _validate_pairs(body: Any) -> list[tuple[str, str]] | str:
    """The cleaned pair list, or a human-readable complaint."""
    if not isinstance(body, dict):
        return "request body must be a JSON object"
    if "pairs" not in body:
        return 'request body must contain a "pairs" list'
    pairs = body["pairs"]
    if not isinstance(pairs, list):
        return '"pairs" must be a list'
    cleaned = []
    for i, entry in enumerate(pairs):
        if not isinstance(entry, dict):
            return f"pair {i} must be an object"
        for key in ("hypothesis", "premise"):
            if not isinstance(entry.get(key), str):
                return f'pair {i} is missing a string "{key}"'
            if not entry[key].strip():
                return f'pair {i} has an empty "{key}"'
        cleaned.append((entry["hypothesis"], entry["premise"]))
    return cleaned


def create_app(cfg: ServiceConfig | None = None, model: Model | None = _BUILD_DEFAULT) -> FastAPI:
    """Assemble the service around a config and an optional injected model.

    Passing ``model=None`` explicitly builds an app whose model never loaded,
    which reports unhealthy — handy for probing orchestration behavior.
    """
    cfg = cfg or ServiceConfig()
    if model is _BUILD_DEFAULT:
        model = build_model(cfg)
    app = FastAPI(title="scorer-service", docs_url=None, redoc_url=None)
    inference_lock = threading.Lock()

    @app.get("/v1/health")
    def health():
        if model is None:
            return _error(500, "model not loaded")
        return {"status": "ok", "model": cfg.model, "template": cfg.template}

    @app.post("/v1/score")
    async def score(request: Request):
        if model is None:
            return _error(500, "model not loaded")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        pairs = _validate_pairs(body)
        if isinstance(pairs, str):
            return _error(400, pairs)
        if len(pairs) > cfg.max_batch:
            return _error(413, f"batch of {len(pairs)} exceeds max_batch {cfg.max_batch}")
        try:
            with inference_lock:
                raw = model.score_pairs(pairs)
        except Exception as exc:
            logger.exception("model failure scoring %d pairs", len(pairs))
            return _error(500, f"model failure: {exc}")
        if len(raw) != len(pairs):
            return _error(500, f"model returned {len(raw)} scores for {len(pairs)} pairs")
        scores = []
        for triple in raw:
            by_label = dict(zip(cfg.label_order, softmax3(triple)))
            scores.append({"e": by_label["e"], "n": by_label["n"], "c": by_label["c"]})
        return {"scores": scores}

    return app
