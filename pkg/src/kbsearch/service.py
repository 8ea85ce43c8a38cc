"""HTTP face of the retrieval platform.

Loads the manifest and one knowledge base per configured model at
startup (immutable thereafter) and serves search, item lookup, corpus
stats, cluster exports, and the model roster over JSON. Images are
static files under /images/.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field

import httpx
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import cluster as cluster_mod
from .corpus import CorpusManifest, compute_stats, load_manifest, parse_item_id
from .embedding import remote_embed, stub_embed
from .errors import (
    KbSearchError,
    MalformedId,
    ProviderUnreachable,
    TooFewPoints,
)
from .search import SearchParams, search
from .store import KnowledgeBase, load_kb

log = logging.getLogger("kbsearch.service")


@dataclass(frozen=True)
class ServiceConfig:
    kb_paths: dict                       # model name -> KB file path
    manifest_path: str
    image_root: str
    provider_url: str                    # "stub:<seed>" for offline mode
    bind: str = "127.0.0.1:8000"
    default_params: SearchParams = field(default_factory=SearchParams)
    cluster_seed: int = 0
    generative_url: str | None = None    # optional annotation hook, off by default

    @staticmethod
    def from_file(path: str) -> "ServiceConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        defaults = raw.get("defaults", {})
        cfg = ServiceConfig(
            kb_paths=dict(raw["kbs"]),
            manifest_path=raw["manifest"],
            image_root=raw["image_root"],
            provider_url=raw.get("provider", "stub:0"),
            bind=raw.get("bind", "127.0.0.1:8000"),
            default_params=SearchParams(
                top_k=defaults.get("top_k", 5),
                threshold=defaults.get("threshold", 0.5)),
            cluster_seed=raw.get("cluster_seed", 0),
            generative_url=raw.get("generative_url"),
        )
        return cfg.with_env_overrides()

    def with_env_overrides(self) -> "ServiceConfig":
        bind = os.environ.get("KBSEARCH_BIND", self.bind)
        provider = os.environ.get("KBSEARCH_PROVIDER", self.provider_url)
        if bind == self.bind and provider == self.provider_url:
            return self
        return ServiceConfig(
            kb_paths=self.kb_paths, manifest_path=self.manifest_path,
            image_root=self.image_root, provider_url=provider, bind=bind,
            default_params=self.default_params, cluster_seed=self.cluster_seed,
            generative_url=self.generative_url)


class SearchRequest(BaseModel):
    query: str
    model: str
    top_k: int | None = None
    threshold: float | None = None


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def _embed_query(config: ServiceConfig, kb: KnowledgeBase, query: str):
    if config.provider_url.startswith("stub:"):
        seed = int(config.provider_url.split(":", 1)[1])
        return stub_embed(query, kb.descriptor.dim, seed)
    return remote_embed(config.provider_url, kb.descriptor.name, query,
                        kb.descriptor.pooling, expected_dim=kb.descriptor.dim)


def _annotate(config: ServiceConfig, query: str, hits: list[dict]) -> str | None:
    if not config.generative_url:
        return None
    try:
        resp = httpx.post(config.generative_url,
                          json={"query": query, "hits": hits}, timeout=30.0)
        if resp.status_code == 200:
            return resp.json().get("annotation")
    except httpx.HTTPError:
        log.warning("generative hook unreachable; skipping annotation")
    return None


def load_state(config: ServiceConfig):
    """Load and cross-validate manifest and KBs. Raises on any mismatch."""
    if not config.kb_paths:
        raise ValueError("no knowledge bases configured")
    if not os.path.isdir(config.image_root):
        raise ValueError(f"image root {config.image_root!r} does not exist")
    manifest = load_manifest(config.manifest_path)
    kbs = {}
    for model, path in config.kb_paths.items():
        kb = load_kb(path)
        if kb.descriptor.name != model:
            raise ValueError(
                f"KB at {path} is for model {kb.descriptor.name!r}, "
                f"configured as {model!r}")
        kbs[model] = kb
    return manifest, kbs


def create_app(config: ServiceConfig) -> FastAPI:
    manifest, kbs = load_state(config)
    items_by_id = {item.id: item for item in manifest.items}

    app = FastAPI(title="kbsearch service")

    @app.middleware("http")
    async def request_log(request: Request, call_next):
        start = time.monotonic()
        response = await call_next(request)
        print(json.dumps({
            "method": request.method,
            "path": request.url.path,
            "status": response.status_code,
            "ms": round((time.monotonic() - start) * 1000, 2),
        }), flush=True)
        return response

    def hit_payload(hit):
        item = items_by_id[hit.id]
        return {
            "id": hit.id,
            "score": hit.score,
            "text": item.text,
            "image_url": f"/images/{item.image_path}",
            "language": item.language,
            "image_kind": item.image_kind,
        }

    @app.post("/api/search")
    def api_search(req: SearchRequest, language: str | None = None):
        if req.model not in kbs:
            return _error(400, f"unknown model {req.model!r}")
        if not req.query.strip():
            return _error(400, "empty query")
        try:
            params = SearchParams(
                top_k=req.top_k if req.top_k is not None
                else config.default_params.top_k,
                threshold=req.threshold if req.threshold is not None
                else config.default_params.threshold)
        except ValueError as exc:
            return _error(400, str(exc))
        kb = kbs[req.model]
        try:
            qvec = _embed_query(config, kb, req.query)
            result = search(kb, qvec, params)
        except ProviderUnreachable as exc:
            return _error(502, str(exc))
        except KbSearchError as exc:
            return _error(500, str(exc))
        hits = [hit_payload(h) for h in result.hits]
        if language is not None:
            hits = [h for h in hits if h["language"] == language]
        body = {"model": result.model, "threshold_used": result.threshold_used,
                "hits": hits}
        annotation = _annotate(config, req.query, hits)
        if annotation is not None:
            body["annotation"] = annotation
        return body

    @app.get("/api/items/{item_id}")
    def api_item(item_id: str):
        try:
            parse_item_id(item_id)
        except MalformedId as exc:
            return _error(400, str(exc))
        item = items_by_id.get(item_id)
        if item is None:
            return _error(404, f"no item {item_id}")
        payload = item.to_record()
        payload["image_url"] = f"/images/{item.image_path}"
        return payload

    @app.get("/api/stats")
    def api_stats():
        stats = compute_stats(manifest)
        return {
            "total": stats.total,
            "by_image_kind": stats.by_image_kind,
            "by_language": stats.by_language,
            "by_disease": stats.by_disease,
        }

    @app.get("/api/clusters")
    def api_clusters(model: str, k: int = 10):
        if model not in kbs:
            return _error(400, f"unknown model {model!r}")
        if k < 1:
            return _error(400, "k must be >= 1")
        kb = kbs[model]
        if k > len(kb):
            return _error(400, f"k={k} exceeds item count {len(kb)}")
        try:
            reduced = cluster_mod.pca_reduce(kb.matrix)
            assignment = cluster_mod.kmeans(reduced.points, k=k,
                                            seed=config.cluster_seed)
        except (TooFewPoints, KbSearchError) as exc:
            return _error(400, str(exc))
        return cluster_mod.cluster_export(reduced, assignment, manifest)

    @app.get("/api/models")
    def api_models():
        return [
            {"name": kb.descriptor.name, "dim": kb.descriptor.dim,
             "modality": kb.descriptor.modality, "pooling": kb.descriptor.pooling}
            for kb in kbs.values()
        ]

    app.mount("/images", StaticFiles(directory=config.image_root), name="images")
    ui_dir = os.environ.get("KBSEARCH_UI_DIR")
    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def run(config: ServiceConfig):
    import uvicorn

    host, _, port = config.bind.rpartition(":")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port))
