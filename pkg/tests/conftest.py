import json

import numpy as np
import pytest

from kbsearch.corpus import CorpusManifest, KnowledgeItem, load_manifest
from kbsearch.embedding import EmbedderDescriptor, stub_embed
from kbsearch.store import KnowledgeBase, build_kb


def make_item(i, language="en", image_kind="histopathology",
              disease_class="other", text=None):
    return KnowledgeItem(
        id=f"P{i:08d}",
        text=text or f"sample description {i}",
        image_path=f"img/{i}.jpg",
        language=language,
        image_kind=image_kind,
        disease_class=disease_class,
        source_book="Renal Atlas",
        page=i + 1,
    )


def manifest_line(i, **overrides):
    rec = {
        "id": f"P{i:08d}",
        "text": f"sample description {i}",
        "image_path": f"img/{i}.jpg",
        "language": "en",
        "image_kind": "histopathology",
        "disease_class": "other",
        "source_book": "Renal Atlas",
    }
    rec.update(overrides)
    return json.dumps(rec, ensure_ascii=False)


@pytest.fixture
def six_item_manifest():
    items = (
        make_item(1, language="en"),
        make_item(2, language="en", image_kind="ihc"),
        make_item(3, language="zh", text="肾小球 病理"),
        make_item(4, language="en", disease_class="tumor"),
        make_item(5, language="zh", text="肾 活检 标本"),
        make_item(6, language="en"),
    )
    return CorpusManifest(name="fixture", version="1", items=items)


def random_kb(rng, n=None, d=None, name="stub-1"):
    n = int(rng.integers(0, 257)) if n is None else n
    d = int(rng.integers(1, 65)) if d is None else d
    ids = tuple(f"P{i:08d}" for i in range(n))
    matrix = rng.standard_normal((n, d)).astype(np.float32)
    # avoid zero rows so cosine stays defined
    for i in range(n):
        if not np.linalg.norm(matrix[i]):
            matrix[i, 0] = 1.0
    descriptor = EmbedderDescriptor(name=name, modality="text", dim=d,
                                    pooling="mean")
    return KnowledgeBase(descriptor=descriptor, ids=ids, matrix=matrix)


def stub_kb(manifest, dim=8, seed=7, name=None):
    descriptor = EmbedderDescriptor(name=name or f"stub-{seed}",
                                    modality="text", dim=dim, pooling="mean")
    return build_kb(manifest, lambda t: stub_embed(t, dim, seed), descriptor)


@pytest.fixture
def manifest_from_lines():
    def load(lines):
        return load_manifest("\n".join(lines).encode("utf-8"))
    return load
