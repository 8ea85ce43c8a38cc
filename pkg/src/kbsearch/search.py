"""Cosine top-k retrieval with threshold-gated empty results.

Exhaustive scan over the knowledge base; ties broken by ascending item
id so output is fully deterministic. Scores accumulate in float64 over
the float32 stored values for stable ranking near ties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroVector
from .store import KnowledgeBase

DEFAULT_TOP_K = 5
DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class SearchParams:
    top_k: int = DEFAULT_TOP_K
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not -1.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must be in [-1, 1]")


@dataclass(frozen=True)
class SearchHit:
    id: str
    score: float
    rank: int


@dataclass(frozen=True)
class SearchResult:
    hits: tuple[SearchHit, ...]
    model: str
    threshold_used: float


def cosine_similarity(a, b) -> float:
    """dot(a,b) / (|a| * |b|), clamped to [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity undefined for zero vectors")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def score_all(kb: KnowledgeBase, q) -> np.ndarray:
    """Cosine similarity of the query against every KB row (float64)."""
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] != kb.descriptor.dim:
        raise DimensionMismatch(
            f"query dim {q.shape} does not match kb dim {kb.descriptor.dim}")
    qn = np.linalg.norm(q)
    if qn == 0.0:
        raise ZeroVector("query vector is zero")
    if len(kb) == 0:
        return np.zeros(0)
    matrix = kb.matrix.astype(np.float64)
    row_norms = np.linalg.norm(matrix, axis=1)
    if np.any(row_norms == 0.0):
        raise ZeroVector("knowledge base contains a zero vector")
    scores = matrix @ q / (row_norms * qn)
    return np.clip(scores, -1.0, 1.0)


def search(kb: KnowledgeBase, q, params: SearchParams | None = None) -> SearchResult:
    """Rank KB items against a query vector.

    Keeps items scoring >= threshold, sorts by score descending with
    ties broken by ascending id, and truncates to top_k. An all-filtered
    query returns empty hits, not an error.
    """
    params = params or SearchParams()
    scores = score_all(kb, q)
    candidates = [(float(s), kb.ids[i]) for i, s in enumerate(scores)
                  if s >= params.threshold]
    candidates.sort(key=lambda t: (-t[0], t[1]))
    hits = tuple(
        SearchHit(id=item_id, score=score, rank=rank)
        for rank, (score, item_id) in enumerate(candidates[:params.top_k], start=1)
    )
    return SearchResult(hits=hits, model=kb.descriptor.name,
                        threshold_used=params.threshold)
