import json

import pytest
from fastapi.testclient import TestClient
from jsonschema import validate

from kbsearch.cluster import cluster_export, kmeans, pca_reduce
from kbsearch.corpus import dump_manifest
from kbsearch.embedding import stub_embed
from kbsearch.search import SearchParams, search
from kbsearch.service import ServiceConfig, create_app, load_state
from kbsearch.store import save_kb

from conftest import stub_kb

SEARCH_RESPONSE_SCHEMA = {
    "type": "object",
    "required": ["model", "threshold_used", "hits"],
    "properties": {
        "model": {"type": "string"},
        "threshold_used": {"type": "number"},
        "hits": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "score", "text", "image_url",
                             "language", "image_kind"],
                "properties": {
                    "id": {"type": "string", "pattern": "^P[0-9]{8}$"},
                    "score": {"type": "number", "minimum": -1, "maximum": 1},
                    "text": {"type": "string"},
                    "image_url": {"type": "string"},
                    "language": {"enum": ["zh", "en"]},
                    "image_kind": {"enum": ["histopathology", "ihc"]},
                },
            },
        },
    },
}

STATS_SCHEMA = {
    "type": "object",
    "required": ["total", "by_image_kind", "by_language", "by_disease"],
}

CLUSTERS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["id", "x", "y", "cluster", "language", "image_kind"],
    },
}

MODELS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["name", "dim", "modality", "pooling"],
    },
}


@pytest.fixture
def deployment(tmp_path, six_item_manifest):
    manifest_path = tmp_path / "manifest.jsonl"
    manifest_path.write_bytes(dump_manifest(six_item_manifest))
    images = tmp_path / "images" / "img"
    images.mkdir(parents=True)
    for item in six_item_manifest.items:
        (tmp_path / "images" / item.image_path).write_bytes(b"fake jpeg")
    kb = stub_kb(six_item_manifest, dim=8, seed=7)
    kb_path = tmp_path / "stub-7.kb"
    save_kb(kb, str(kb_path))
    config = ServiceConfig(
        kb_paths={"stub-7": str(kb_path)},
        manifest_path=str(manifest_path),
        image_root=str(tmp_path / "images"),
        provider_url="stub:7",
        cluster_seed=42,
    )
    return config, kb, six_item_manifest


@pytest.fixture
def client(deployment):
    config, _, _ = deployment
    return TestClient(create_app(config))


class TestSearchEndpoint:
    def test_matches_in_process_pipeline(self, client, deployment):
        _, kb, manifest = deployment
        query = "sample description 3"
        resp = client.post("/api/search", json={
            "query": query, "model": "stub-7", "threshold": -1.0})
        assert resp.status_code == 200
        body = resp.json()
        validate(body, SEARCH_RESPONSE_SCHEMA)
        expected = search(kb, stub_embed(query, 8, 7),
                          SearchParams(top_k=5, threshold=-1.0))
        assert [h["id"] for h in body["hits"]] == [h.id for h in expected.hits]
        for got, want in zip(body["hits"], expected.hits):
            assert got["score"] == pytest.approx(want.score, abs=1e-6)
        scores = [h["score"] for h in body["hits"]]
        assert scores == sorted(scores, reverse=True)
        assert len(body["hits"]) <= 5

    def test_hits_joined_with_manifest(self, client, deployment):
        _, _, manifest = deployment
        resp = client.post("/api/search", json={
            "query": "anything", "model": "stub-7", "threshold": -1.0})
        for hit in resp.json()["hits"]:
            item = manifest.get(hit["id"])
            assert hit["text"] == item.text
            assert hit["image_url"] == f"/images/{item.image_path}"
            assert hit["language"] == item.language

    def test_unmet_threshold_is_200_with_empty_hits(self, client):
        resp = client.post("/api/search", json={
            "query": "anything", "model": "stub-7", "threshold": 0.999})
        assert resp.status_code == 200
        assert resp.json()["hits"] == []

    def test_unknown_model(self, client):
        resp = client.post("/api/search", json={"query": "x", "model": "nope"})
        assert resp.status_code == 400
        assert "error" in resp.json()

    def test_empty_query(self, client):
        resp = client.post("/api/search", json={"query": "  ", "model": "stub-7"})
        assert resp.status_code == 400

    def test_bad_params(self, client):
        resp = client.post("/api/search", json={
            "query": "x", "model": "stub-7", "top_k": 0})
        assert resp.status_code == 400

    def test_language_filter(self, client):
        resp = client.post("/api/search?language=zh", json={
            "query": "x", "model": "stub-7", "threshold": -1.0})
        assert all(h["language"] == "zh" for h in resp.json()["hits"])

    def test_provider_unreachable_is_502(self, deployment):
        config, _, _ = deployment
        config = ServiceConfig(
            kb_paths=config.kb_paths, manifest_path=config.manifest_path,
            image_root=config.image_root,
            provider_url="http://127.0.0.1:1")
        client = TestClient(create_app(config))
        resp = client.post("/api/search", json={"query": "x", "model": "stub-7"})
        assert resp.status_code == 502


class TestItemEndpoint:
    def test_existing_item(self, client, deployment):
        _, _, manifest = deployment
        item = manifest.items[2]
        resp = client.get(f"/api/items/{item.id}")
        assert resp.status_code == 200
        body = resp.json()
        assert body["text"] == item.text
        assert body["language"] == item.language
        assert body["image_url"] == f"/images/{item.image_path}"

    def test_absent_item_404(self, client):
        assert client.get("/api/items/P99999999").status_code == 404

    def test_malformed_id_400(self, client):
        assert client.get("/api/items/banana").status_code == 400


class TestStatsEndpoint:
    def test_fixture_counts(self, client):
        resp = client.get("/api/stats")
        assert resp.status_code == 200
        body = resp.json()
        validate(body, STATS_SCHEMA)
        assert body["by_language"] == {"en": 4, "zh": 2}
        assert body["total"] == 6

    def test_facets_sum_to_total(self, client):
        body = client.get("/api/stats").json()
        for facet in ("by_image_kind", "by_language", "by_disease"):
            assert sum(body[facet].values()) == body["total"]


class TestClustersEndpoint:
    def test_matches_in_process_pipeline(self, client, deployment):
        config, kb, manifest = deployment
        resp = client.get("/api/clusters", params={"model": "stub-7", "k": 2})
        assert resp.status_code == 200
        body = resp.json()
        validate(body, CLUSTERS_SCHEMA)
        reduced = pca_reduce(kb.matrix)
        assignment = kmeans(reduced.points, k=2, seed=config.cluster_seed)
        assert body == cluster_export(reduced, assignment, manifest)
        assert all(rec["cluster"] in (0, 1) for rec in body)

    def test_k_exceeding_n_is_400(self, client):
        resp = client.get("/api/clusters", params={"model": "stub-7", "k": 7})
        assert resp.status_code == 400

    def test_bad_k(self, client):
        assert client.get("/api/clusters",
                          params={"model": "stub-7", "k": 0}).status_code == 400

    def test_unknown_model(self, client):
        assert client.get("/api/clusters",
                          params={"model": "nope"}).status_code == 400

    def test_deterministic_bodies(self, client):
        a = client.get("/api/clusters", params={"model": "stub-7", "k": 2})
        b = client.get("/api/clusters", params={"model": "stub-7", "k": 2})
        assert a.content == b.content


class TestModelsEndpoint:
    def test_entries_match_kb_headers(self, client, deployment):
        _, kb, _ = deployment
        body = client.get("/api/models").json()
        validate(body, MODELS_SCHEMA)
        assert body == [{"name": "stub-7", "dim": 8, "modality": "text",
                         "pooling": "mean"}]


class TestStaticImages:
    def test_image_served(self, client, deployment):
        _, _, manifest = deployment
        resp = client.get(f"/images/{manifest.items[0].image_path}")
        assert resp.status_code == 200
        assert resp.content == b"fake jpeg"

    def test_traversal_blocked(self, client):
        resp = client.get("/images/../manifest.jsonl")
        assert resp.status_code in (400, 404)


class TestStartupValidation:
    def test_empty_config_refused(self, deployment):
        config, _, _ = deployment
        bad = ServiceConfig(kb_paths={}, manifest_path=config.manifest_path,
                            image_root=config.image_root, provider_url="stub:7")
        with pytest.raises(ValueError):
            load_state(bad)

    def test_model_name_mismatch_refused(self, deployment):
        config, _, _ = deployment
        bad = ServiceConfig(kb_paths={"gpt2": config.kb_paths["stub-7"]},
                            manifest_path=config.manifest_path,
                            image_root=config.image_root, provider_url="stub:7")
        with pytest.raises(ValueError, match="stub-7"):
            load_state(bad)

    def test_missing_image_root_refused(self, deployment, tmp_path):
        config, _, _ = deployment
        bad = ServiceConfig(kb_paths=config.kb_paths,
                            manifest_path=config.manifest_path,
                            image_root=str(tmp_path / "nope"),
                            provider_url="stub:7")
        with pytest.raises(ValueError):
            load_state(bad)


class TestConfigFile:
    def test_from_file_and_env_overrides(self, deployment, tmp_path, monkeypatch):
        config, _, _ = deployment
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({
            "kbs": config.kb_paths,
            "manifest": config.manifest_path,
            "image_root": config.image_root,
            "provider": "stub:7",
            "defaults": {"top_k": 3, "threshold": 0.2},
            "cluster_seed": 42,
        }))
        loaded = ServiceConfig.from_file(str(cfg_path))
        assert loaded.default_params.top_k == 3
        assert loaded.cluster_seed == 42
        monkeypatch.setenv("KBSEARCH_BIND", "0.0.0.0:9999")
        monkeypatch.setenv("KBSEARCH_PROVIDER", "http://models:8080")
        overridden = ServiceConfig.from_file(str(cfg_path))
        assert overridden.bind == "0.0.0.0:9999"
        assert overridden.provider_url == "http://models:8080"


class TestGenerativeHook:
    def test_disabled_by_default(self, client):
        resp = client.post("/api/search", json={
            "query": "x", "model": "stub-7", "threshold": -1.0})
        assert "annotation" not in resp.json()

    def test_unreachable_hook_is_non_fatal(self, deployment):
        config, _, _ = deployment
        hooked = ServiceConfig(
            kb_paths=config.kb_paths, manifest_path=config.manifest_path,
            image_root=config.image_root, provider_url="stub:7",
            generative_url="http://127.0.0.1:1/annotate")
        client = TestClient(create_app(hooked))
        resp = client.post("/api/search", json={
            "query": "x", "model": "stub-7", "threshold": -1.0})
        assert resp.status_code == 200
        assert "annotation" not in resp.json()
