"""HTTP/JSON registry API.

Endpoints::

    POST /services                 register a WSDL document
    GET  /services/search          ?q=...&select=...&mode=scan|indexed
    GET  /model/tsp                ?x=...&y=...&ratio=...
    GET  /healthz

Searches read the in-memory registry concurrently; registrations go through a
single writer lock and are persisted before the response is sent.
"""

from __future__ import annotations

import hashlib
import json
import threading
from fractions import Fraction
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import costmodel
from .discovery import Query, QueryError, result_payload, search
from .registry import DuplicateRegistrationError, Registry
from .taxonomy import Classification, TaxonomyError, parse_classification
from .wsdl import WsdlError, parse_wsdl


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def _classification_from(body) -> Classification:
    raw = body.get("classification")
    if isinstance(raw, str):
        return parse_classification(raw)
    if isinstance(raw, dict):
        if "cost" in raw:
            return parse_classification(f"{raw.get('behavior', '')},{raw['cost']}")
        return parse_classification(f"{raw.get('behavior', '')},{raw.get('tier', '')},{raw.get('mode', '')}")
    if isinstance(raw, list):
        return parse_classification(",".join(str(v) for v in raw))
    raise TaxonomyError("missing classification")


def _record_json(rec) -> dict:
    c = rec.decoded
    out = rec.to_json()
    out["labels"] = {"behavior": c.behavior.label, "tier": c.tier.label, "cost": c.cost_label}
    return out


def create_app(registry_path: str | Path | None = None, registry: Registry | None = None) -> FastAPI:
    """Build the app around a registry file (loaded if present) or an in-memory registry."""
    path = Path(registry_path) if registry_path is not None else None
    if registry is None:
        registry = Registry.load_or_new(path) if path is not None else Registry()
    write_lock = threading.Lock()
    app = FastAPI(title="svcdisco", version="0.1.0")
    app.state.registry = registry

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "records": len(registry)}

    @app.post("/services")
    async def register_service(request: Request):
        try:
            body = json.loads(await request.body())
        except ValueError:
            return _error(400, "request body must be JSON")
        if not isinstance(body, dict) or not isinstance(body.get("wsdl"), str):
            return _error(400, "body needs a 'wsdl' string and a 'classification'")
        try:
            c = _classification_from(body)
        except TaxonomyError as exc:
            return _error(422, f"taxonomy: {exc}")
        text = body["wsdl"]
        uri = body.get("uri") or "urn:sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()
        try:
            doc = parse_wsdl(text.encode("utf-8"), source_uri=uri)
        except WsdlError as exc:
            return _error(400, f"wsdl: {exc}")
        with write_lock:
            try:
                rec = registry.register(doc, c)
            except DuplicateRegistrationError as exc:
                return _error(409, f"registry: {exc}")
            if path is not None:
                registry.save(path)
        return JSONResponse(_record_json(rec), status_code=201)

    @app.get("/services/search")
    def search_services(q: str = "", select: str = "", mode: str = "scan"):
        try:
            query = Query.parse(q, select)
            res = search(registry, query, mode)
        except QueryError as exc:
            return _error(400, f"discovery: {exc}")
        payload = result_payload(registry, res)
        payload["query"] = {"keywords": list(query.keywords), "select": query.selection.labels(), "mode": mode}
        return payload

    @app.get("/model/tsp")
    def model_tsp(x: str = "", y: str = "", ratio: str = "1"):
        try:
            xi, yi = int(x), int(y)
            p = costmodel.CostModelParams.with_ratio(Fraction(ratio))
            pred = costmodel.predict(xi, yi, p)
        except (ValueError, ZeroDivisionError, costmodel.CostModelError) as exc:
            return _error(400, f"costmodel: {exc}")
        return {"x": xi, "y": yi, "ratio": str(p.t_disc), **pred.to_json()}

    return app
