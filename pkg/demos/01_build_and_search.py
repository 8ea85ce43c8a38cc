"""Build a knowledge base from a small manifest and query it.

Walks the core loop: manifest -> stub embeddings -> KB file on disk ->
reload -> cosine top-k search with threshold gating.
"""

import json
import tempfile

from kbsearch import (
    EmbedderDescriptor,
    SearchParams,
    build_kb,
    load_kb,
    load_manifest,
    save_kb,
    search,
    stub_embed,
)

RECORDS = [
    {"id": "P00000001", "text": "glomerulus with mesangial expansion",
     "image_path": "img/1.jpg", "language": "en",
     "image_kind": "histopathology", "disease_class": "other",
     "source_book": "Renal Atlas"},
    {"id": "P00000002", "text": "clear cell renal carcinoma, nested growth",
     "image_path": "img/2.jpg", "language": "en",
     "image_kind": "histopathology", "disease_class": "tumor",
     "source_book": "Renal Atlas"},
    {"id": "P00000003", "text": "IgA nephropathy immunofluorescence pattern",
     "image_path": "img/3.jpg", "language": "en",
     "image_kind": "ihc", "disease_class": "other",
     "source_book": "Renal Atlas"},
    {"id": "P00000004", "text": "肾小球 系膜 增生",
     "image_path": "img/4.jpg", "language": "zh",
     "image_kind": "histopathology", "disease_class": "other",
     "source_book": "肾脏病理图谱"},
]

manifest_bytes = "\n".join(json.dumps(r, ensure_ascii=False)
                           for r in RECORDS).encode("utf-8")
manifest = load_manifest(manifest_bytes)
print(f"loaded manifest with {len(manifest)} items")

# the stub embedder stands in for a real model server
DIM, SEED = 16, 7
descriptor = EmbedderDescriptor(name=f"stub-{SEED}", modality="text",
                                dim=DIM, pooling="mean")
kb = build_kb(manifest, lambda text: stub_embed(text, DIM, SEED), descriptor)

with tempfile.NamedTemporaryFile(suffix=".kb", delete=False) as fh:
    n_bytes = save_kb(kb, fh)
    kb_path = fh.name
print(f"saved {n_bytes} bytes to {kb_path}")

kb = load_kb(kb_path)
print(f"reloaded KB: n={len(kb)}, dim={kb.descriptor.dim}, "
      f"model={kb.descriptor.name}")

query = "renal tumor histology"
qvec = stub_embed(query, DIM, SEED)
result = search(kb, qvec, SearchParams(top_k=5, threshold=-1.0))
print(f"\nquery: {query!r}")
for hit in result.hits:
    print(f"  #{hit.rank} {hit.id}  score={hit.score:+.4f}")

# a threshold above every score yields empty hits, not an error
strict = search(kb, qvec, SearchParams(top_k=5, threshold=0.99))
print(f"\nwith threshold 0.99: {len(strict.hits)} hits (empty result contract)")
