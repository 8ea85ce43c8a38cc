"""Pooling of token hidden states into fixed-length feature vectors.

Real model inference lives behind an HTTP provider (POST /embed); this
module ships the pooling rules, a deterministic stub embedder for
offline use, and the client for remote providers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import httpx
import numpy as np

from .errors import (
    DimensionMismatch,
    ProviderError,
    ProviderUnreachable,
    ZeroVector,
)

POOLING_MODES = ("mean", "flatten")
MODALITIES = ("text", "image")


@dataclass(frozen=True)
class EmbedderDescriptor:
    name: str
    modality: str
    dim: int
    pooling: str

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise ValueError(f"unknown modality {self.modality!r}")
        if self.pooling not in POOLING_MODES:
            raise ValueError(f"unknown pooling {self.pooling!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")


def as_token_matrix(m) -> np.ndarray:
    """Validate and coerce a per-token hidden-state matrix (n_tokens x dim)."""
    arr = np.asarray(m, dtype=np.float32)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("token matrix must be 2-D with at least one row and column")
    if not np.all(np.isfinite(arr)):
        raise ValueError("token matrix contains non-finite values")
    return arr


def mean_pool(m) -> np.ndarray:
    """Column-wise arithmetic mean over the token axis."""
    arr = as_token_matrix(m)
    return arr.mean(axis=0, dtype=np.float64).astype(np.float32)


def flatten_pool(m) -> np.ndarray:
    """Row-major concatenation of the token matrix into one long vector."""
    arr = as_token_matrix(m)
    return arr.reshape(-1).copy()


def l2_normalize(v) -> np.ndarray:
    """Scale a vector to unit Euclidean norm. Raises ZeroVector on zero input."""
    arr = np.asarray(v, dtype=np.float32)
    norm = float(np.linalg.norm(arr.astype(np.float64)))
    if norm == 0.0:
        raise ZeroVector("cannot normalize a zero vector")
    return (arr.astype(np.float64) / norm).astype(np.float32)


def stub_embed(text: str, dim: int, seed: int) -> np.ndarray:
    """Deterministic embedding of text bytes: dim floats in [-1, 1].

    Pure function of (text bytes, dim, seed); identical across processes
    and platforms. Never returns a zero vector.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    digest = hashlib.sha256(
        str(int(seed)).encode("ascii") + b"\x00" + text.encode("utf-8")
    ).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    vec = rng.uniform(-1.0, 1.0, size=dim).astype(np.float32)
    if not np.any(vec):
        vec[0] = np.float32(1.0)
    return vec


class StubEmbedder:
    """In-process embedder backed by stub_embed; used in test/offline mode."""

    def __init__(self, seed: int, dim: int, name: str | None = None,
                 pooling: str = "mean"):
        self.seed = int(seed)
        self.descriptor = EmbedderDescriptor(
            name=name or f"stub-{seed}", modality="text", dim=dim, pooling=pooling)

    def embed(self, text: str) -> np.ndarray:
        return stub_embed(text, self.descriptor.dim, self.seed)


_UNREACHABLE_STATUSES = (502, 503, 504)


def remote_embed(base_url: str, model: str, input_text: str, pooling: str,
                 expected_dim: int | None = None,
                 client: httpx.Client | None = None,
                 timeout: float = 30.0) -> np.ndarray:
    """Call a provider's POST /embed and return the vector.

    Raises ProviderUnreachable on connection failure or gateway-style
    statuses, ProviderError on other non-2xx responses, and
    DimensionMismatch when the returned length disagrees with
    expected_dim.
    """
    if pooling not in POOLING_MODES:
        raise ValueError(f"unknown pooling {pooling!r}")
    url = base_url.rstrip("/") + "/embed"
    body = {"model": model, "input": input_text, "pooling": pooling}
    try:
        if client is not None:
            resp = client.post(url, json=body, timeout=timeout)
        else:
            resp = httpx.post(url, json=body, timeout=timeout)
    except httpx.HTTPError as exc:
        raise ProviderUnreachable(f"provider at {base_url} unreachable: {exc}") from exc
    if resp.status_code in _UNREACHABLE_STATUSES:
        raise ProviderUnreachable(
            f"provider at {base_url} returned {resp.status_code}")
    if not (200 <= resp.status_code < 300):
        try:
            message = resp.json().get("error", resp.text)
        except ValueError:
            message = resp.text
        raise ProviderError(f"provider error ({resp.status_code}): {message}")
    payload = resp.json()
    vec = np.asarray(payload["vector"], dtype=np.float32)
    if vec.ndim != 1:
        raise ProviderError("provider returned a non-1-D vector")
    if expected_dim is not None and vec.shape[0] != expected_dim:
        raise DimensionMismatch(
            f"provider returned dim {vec.shape[0]}, expected {expected_dim}")
    return vec


class RemoteEmbedder:
    """Embedder that delegates to an HTTP provider implementing /embed."""

    def __init__(self, base_url: str, descriptor: EmbedderDescriptor,
                 timeout: float = 30.0):
        self.base_url = base_url
        self.descriptor = descriptor
        self.timeout = timeout
        self._client = httpx.Client()

    def embed(self, text: str) -> np.ndarray:
        return remote_embed(
            self.base_url, self.descriptor.name, text, self.descriptor.pooling,
            expected_dim=self.descriptor.dim, client=self._client,
            timeout=self.timeout)

    def close(self):
        self._client.close()
