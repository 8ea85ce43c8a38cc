"""Stand up the HTTP service against a temporary deployment and call
every endpoint.

Uses the in-process test client so no port is opened; `kbsearch serve
config.json` runs the same app over uvicorn.
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from kbsearch import EmbedderDescriptor, build_kb, load_manifest, save_kb, stub_embed
from kbsearch.service import ServiceConfig, create_app

root = Path(tempfile.mkdtemp())
(root / "images" / "img").mkdir(parents=True)

records = []
for i in range(1, 7):
    records.append({
        "id": f"P{i:08d}", "text": f"pathology case number {i}",
        "image_path": f"img/{i}.jpg",
        "language": "zh" if i % 3 == 0 else "en",
        "image_kind": "ihc" if i == 2 else "histopathology",
        "disease_class": "tumor" if i == 4 else "other",
        "source_book": "demo",
    })
    (root / "images" / f"img/{i}.jpg").write_bytes(b"\xff\xd8 demo jpeg")
(root / "manifest.jsonl").write_text(
    "\n".join(json.dumps(r) for r in records), encoding="utf-8")

manifest = load_manifest(str(root / "manifest.jsonl"))
descriptor = EmbedderDescriptor(name="stub-7", modality="text", dim=8,
                                pooling="mean")
kb = build_kb(manifest, lambda t: stub_embed(t, 8, 7), descriptor)
save_kb(kb, str(root / "stub-7.kb"))

config = ServiceConfig(
    kb_paths={"stub-7": str(root / "stub-7.kb")},
    manifest_path=str(root / "manifest.jsonl"),
    image_root=str(root / "images"),
    provider_url="stub:7",
    cluster_seed=42,
)
client = TestClient(create_app(config))

print("models:", client.get("/api/models").json())
print("stats:", client.get("/api/stats").json())

resp = client.post("/api/search", json={
    "query": "tumor case", "model": "stub-7", "threshold": -1.0, "top_k": 3})
print("\nsearch hits:")
for hit in resp.json()["hits"]:
    print(f"  {hit['id']}  {hit['score']:+.4f}  {hit['text']}")

print("\nitem lookup:", client.get("/api/items/P00000004").json()["text"])

clusters = client.get("/api/clusters", params={"model": "stub-7", "k": 2}).json()
print("\ncluster export (first 3 records):")
for rec in clusters[:3]:
    print(" ", rec)

empty = client.post("/api/search", json={
    "query": "tumor case", "model": "stub-7", "threshold": 0.999})
print("\nthreshold 0.999 ->", empty.json()["hits"], "(HTTP", empty.status_code, ")")
