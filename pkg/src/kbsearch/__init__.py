"""Semantic retrieval platform for image-text knowledge bases."""

from .corpus import (
    CorpusManifest,
    CorpusStats,
    KnowledgeItem,
    compute_stats,
    dump_manifest,
    load_manifest,
    parse_item_id,
)
from .embedding import (
    EmbedderDescriptor,
    RemoteEmbedder,
    StubEmbedder,
    flatten_pool,
    l2_normalize,
    mean_pool,
    remote_embed,
    stub_embed,
)
from .search import SearchHit, SearchParams, SearchResult, cosine_similarity, search
from .store import KnowledgeBase, build_kb, get_vector, load_kb, save_kb

__all__ = [
    "CorpusManifest", "CorpusStats", "KnowledgeItem", "compute_stats",
    "dump_manifest", "load_manifest", "parse_item_id",
    "EmbedderDescriptor", "RemoteEmbedder", "StubEmbedder",
    "flatten_pool", "l2_normalize", "mean_pool", "remote_embed", "stub_embed",
    "SearchHit", "SearchParams", "SearchResult", "cosine_similarity", "search",
    "KnowledgeBase", "build_kb", "get_vector", "load_kb", "save_kb",
]

__version__ = "0.1.0"
