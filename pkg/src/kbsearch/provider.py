"""Loopback stub embedding provider.

Implements the provider wire protocol (POST /embed) over stub_embed so
the whole pipeline runs with no model server. Model names of the form
"stub-<seed>" select the seed; anything else is rejected.
"""

from __future__ import annotations

import re

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .embedding import POOLING_MODES, stub_embed

_STUB_NAME_RE = re.compile(r"^stub-(-?\d+)$")


class EmbedRequest(BaseModel):
    model: str
    input: str
    pooling: str


def create_provider_app(dim: int = 8) -> FastAPI:
    app = FastAPI(title="stub embedding provider")

    @app.post("/embed")
    def embed(req: EmbedRequest):
        match = _STUB_NAME_RE.match(req.model)
        if match is None:
            return JSONResponse(status_code=404,
                                content={"error": f"unknown model {req.model!r}"})
        if req.pooling not in POOLING_MODES:
            return JSONResponse(status_code=400,
                                content={"error": f"unknown pooling {req.pooling!r}"})
        vec = stub_embed(req.input, dim, int(match.group(1)))
        return {"model": req.model, "dim": dim, "vector": [float(x) for x in vec]}

    return app
