"""Collection service endpoint tests (in-process via TestClient)."""

from __future__ import annotations

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from wasmfp.classifier import ClassifierConfig
from wasmfp.matching import save_database
from wasmfp.service import ServiceConfig, create_app
from wasmfp.simulate import builtin_profiles, sample_dataset
from wasmfp.wasmgen import emit_module, name_to_index
from wasmfp.wasmgen import test_names as catalog_names

INDEX = name_to_index()


def make_client(tmp_path, **overrides) -> TestClient:
    config = ServiceConfig(store_path=tmp_path / "records.jsonl", **overrides)
    return TestClient(create_app(config))


def submission(ss1=55.9, ss2=62.1, sg0=10.0, base=10.0, user_agent="probe"):
    timings = [base] * 20
    timings[INDEX["scripted-setter-1"]] = ss1
    timings[INDEX["scripted-setter-2"]] = ss2
    timings[INDEX["scripted-getter-0"]] = sg0
    return {
        "session": "s-1",
        "test_names": list(catalog_names()),
        "timings_ms": timings,
        "user_agent": user_agent,
    }


class TestProbeAssets:
    def test_index_references_harness(self, tmp_path):
        client = make_client(tmp_path)
        resp = client.get("/")
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("text/html")
        assert "/harness.js" in resp.text
        assert 'name="session"' in resp.text

    def test_cross_origin_isolation_headers(self, tmp_path):
        resp = make_client(tmp_path).get("/")
        assert resp.headers["Cross-Origin-Opener-Policy"] == "same-origin"
        assert resp.headers["Cross-Origin-Embedder-Policy"] == "require-corp"

    def test_harness_stub_served_by_default(self, tmp_path):
        resp = make_client(tmp_path).get("/harness.js")
        assert resp.status_code == 200
        assert "javascript" in resp.headers["content-type"]

    def test_configured_harness_file(self, tmp_path):
        bundle = tmp_path / "bundle.js"
        bundle.write_text("console.log('probe');")
        client = make_client(tmp_path, harness_path=bundle)
        assert client.get("/harness.js").text == "console.log('probe');"

    def test_missing_harness_is_500(self, tmp_path):
        client = make_client(tmp_path, harness_path=tmp_path / "nope.js")
        for path in ("/", "/harness.js"):
            resp = client.get(path)
            assert resp.status_code == 500
            assert "harness asset missing" in resp.json()["error"]

    def test_manifest_lists_20_tests(self, tmp_path):
        doc = make_client(tmp_path).get("/manifest.json").json()
        assert len(doc["tests"]) == 20
        assert doc["tests"][0]["name"] == "math-builtin"


class TestWasmEndpoint:
    def test_serves_emitted_bytes(self, tmp_path):
        client = make_client(tmp_path)
        resp = client.get("/wasm/11")
        assert resp.status_code == 200
        assert resp.headers["content-type"] == "application/wasm"
        assert resp.content == emit_module(11).bytes

    @pytest.mark.parametrize("test_id", [0, 21, 999])
    def test_out_of_range_is_404(self, tmp_path, test_id):
        assert make_client(tmp_path).get(f"/wasm/{test_id}").status_code == 404


class TestIngest:
    def test_round_trip_field_identical(self, tmp_path):
        client = make_client(tmp_path)
        body = submission()
        body["client_hint"] = {"note": "lab"}
        resp = client.post("/api/fingerprint", json=body)
        assert resp.status_code == 201
        record_id = resp.json()["id"]
        stored = client.get(f"/api/fingerprints/{record_id}").json()
        assert stored["timings_ms"] == body["timings_ms"]
        assert stored["test_names"] == body["test_names"]
        assert stored["session"] == body["session"]
        assert stored["user_agent"] == body["user_agent"]
        assert stored["client_hint"] == {"note": "lab"}
        assert stored["id"] == record_id
        assert "received_at" in stored
        assert stored["verdict"]["is_chromium"] is True

    def test_wrong_dimension_is_422(self, tmp_path):
        body = submission()
        body["timings_ms"] = body["timings_ms"][:19]
        resp = make_client(tmp_path).post("/api/fingerprint", json=body)
        assert resp.status_code == 422

    def test_malformed_json_is_400(self, tmp_path):
        resp = make_client(tmp_path).post(
            "/api/fingerprint", content=b"{not json",
            headers={"content-type": "application/json"})
        assert resp.status_code == 400

    def test_non_object_body_is_422(self, tmp_path):
        resp = make_client(tmp_path).post("/api/fingerprint", json=[1, 2, 3])
        assert resp.status_code == 422

    @pytest.mark.parametrize("bad", [-1.0, None, "fast", True])
    def test_non_numeric_timing_is_422(self, tmp_path, bad):
        body = submission()
        body["timings_ms"][5] = bad
        resp = make_client(tmp_path).post("/api/fingerprint", json=body)
        assert resp.status_code == 422

    def test_wrong_test_names_is_422(self, tmp_path):
        body = submission()
        body["test_names"] = list(reversed(body["test_names"]))
        resp = make_client(tmp_path).post("/api/fingerprint", json=body)
        assert resp.status_code == 422

    def test_spoofed_user_agent_still_classified_chromium(self, tmp_path):
        # chromium-level setter ratios with a firefox UA string: the verdict
        # exposes the spoof
        client = make_client(tmp_path,
                             thresholds=ClassifierConfig(3.05, 3.10))
        body = submission(ss1=55.9, ss2=62.1, sg0=10.0,
                          user_agent="Mozilla/5.0 Firefox/33.0")
        record_id = client.post("/api/fingerprint", json=body).json()["id"]
        stored = client.get(f"/api/fingerprints/{record_id}").json()
        assert "Firefox" in stored["user_agent"]
        assert stored["verdict"]["is_chromium"] is True

    def test_zero_getter_stores_null_verdict(self, tmp_path):
        client = make_client(tmp_path)
        body = submission(sg0=0.0)
        record_id = client.post("/api/fingerprint", json=body).json()["id"]
        assert client.get(f"/api/fingerprints/{record_id}").json()["verdict"] is None

    def test_listing_grows_append_only(self, tmp_path):
        client = make_client(tmp_path)
        first_id = client.post("/api/fingerprint", json=submission()).json()["id"]
        first = client.get(f"/api/fingerprints/{first_id}").json()
        client.post("/api/fingerprint", json=submission(ss1=20.0))
        records = client.get("/api/fingerprints").json()["records"]
        assert len(records) == 2
        assert records[0] == first

    def test_unknown_record_is_404(self, tmp_path):
        assert make_client(tmp_path).get("/api/fingerprints/zzz").status_code == 404

    def test_persists_across_app_instances(self, tmp_path):
        config = ServiceConfig(store_path=tmp_path / "records.jsonl")
        with TestClient(create_app(config)) as client:
            record_id = client.post("/api/fingerprint",
                                    json=submission()).json()["id"]
        with TestClient(create_app(config)) as client:
            assert client.get(f"/api/fingerprints/{record_id}").status_code == 200


@pytest.fixture()
def model_db_path(tmp_path):
    db = sample_dataset(builtin_profiles(), 3, seed=11)
    path = tmp_path / "db.json"
    save_database(db, path)
    return path, db


class TestMatchEndpoint:
    def test_exact_column_matches_with_zero_distance(self, tmp_path, model_db_path):
        path, db = model_db_path
        client = make_client(tmp_path, model_path=path)
        column = db.matrix[:, 5]
        body = submission()
        body["timings_ms"] = column.tolist()
        record_id = client.post("/api/fingerprint", json=body).json()["id"]
        doc = client.get(f"/api/fingerprints/{record_id}/match?model=euclidean").json()
        assert doc["index"] == 5
        assert doc["distance"] == pytest.approx(0.0, abs=1e-12)
        assert doc["label"] == dict(db.labels[5])

    def test_mahalanobis_model_available(self, tmp_path, model_db_path):
        path, db = model_db_path
        client = make_client(tmp_path, model_path=path)
        body = submission()
        body["timings_ms"] = db.matrix[:, 2].tolist()
        record_id = client.post("/api/fingerprint", json=body).json()["id"]
        doc = client.get(
            f"/api/fingerprints/{record_id}/match?model=mahalanobis").json()
        assert doc["index"] == 2

    def test_pca_without_basis_is_409(self, tmp_path, model_db_path):
        path, _ = model_db_path
        client = make_client(tmp_path, model_path=path)  # no pca_k configured
        record_id = client.post("/api/fingerprint", json=submission()).json()["id"]
        resp = client.get(f"/api/fingerprints/{record_id}/match?model=pca")
        assert resp.status_code == 409

    def test_pca_with_basis_works(self, tmp_path, model_db_path):
        path, db = model_db_path
        client = make_client(tmp_path, model_path=path, pca_k=5)
        body = submission()
        body["timings_ms"] = db.matrix[:, 7].tolist()
        record_id = client.post("/api/fingerprint", json=body).json()["id"]
        doc = client.get(f"/api/fingerprints/{record_id}/match?model=pca").json()
        assert doc["index"] == 7

    def test_no_model_loaded_is_409(self, tmp_path):
        client = make_client(tmp_path)
        record_id = client.post("/api/fingerprint", json=submission()).json()["id"]
        resp = client.get(f"/api/fingerprints/{record_id}/match?model=euclidean")
        assert resp.status_code == 409

    def test_unknown_record_is_404(self, tmp_path, model_db_path):
        path, _ = model_db_path
        client = make_client(tmp_path, model_path=path)
        assert client.get("/api/fingerprints/zzz/match").status_code == 404

    def test_unknown_model_name_is_422(self, tmp_path, model_db_path):
        path, _ = model_db_path
        client = make_client(tmp_path, model_path=path)
        record_id = client.post("/api/fingerprint", json=submission()).json()["id"]
        resp = client.get(f"/api/fingerprints/{record_id}/match?model=cosine")
        assert resp.status_code == 422

    def test_matches_offline_library_result(self, tmp_path, model_db_path):
        path, db = model_db_path
        client = make_client(tmp_path, model_path=path)
        rng = np.random.default_rng(3)
        from wasmfp.matching import nearest_euclidean
        for _ in range(5):
            q = np.abs(rng.normal(20.0, 5.0, 20))
            body = submission()
            body["timings_ms"] = q.tolist()
            record_id = client.post("/api/fingerprint", json=body).json()["id"]
            doc = client.get(
                f"/api/fingerprints/{record_id}/match?model=euclidean").json()
            idx, dist = nearest_euclidean(q, db)
            assert doc["index"] == idx
            assert doc["distance"] == pytest.approx(dist, rel=1e-12)
