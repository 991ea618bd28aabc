"""Acceptance suite: one test per release criterion, at stated tolerances.

Run with `pytest -v tests/test_acceptance.py` for one line per criterion;
each test also prints an ACCEPTANCE PASS line (visible with -s).
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import sys
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from bruteforce import (
    nearest_by_scan,
    nearest_inner_by_scan,
    nearest_mahalanobis_by_solve,
)
from wasmfp.classifier import (
    ClassifierConfig,
    SetterRatios,
    evaluate,
    is_chromium,
    labeled_ratios_from_database,
)
from wasmfp.matching import (
    FingerprintDatabase,
    SimilarityModel,
    estimate_covariance,
    fit_model,
    fit_pca,
    nearest_euclidean,
    nearest_inner_product,
    nearest_mahalanobis,
    nearest_pca,
)
from wasmfp.service import ServiceConfig, create_app
from wasmfp.simulate import builtin_profiles, resolve_counts, sample_dataset
from wasmfp.wasmgen import catalog, emit_module, name_to_index, validate_module

PAPER_THRESHOLDS = ClassifierConfig(ss1_threshold=3.05, ss2_threshold=3.10)


def _passed(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def test_matching_oracle_equivalence():
    """200 random (20x158, query) instances: all three matchers return the
    brute-force index exactly, distances within 1e-9 relative, in < 10 s."""
    rng = np.random.default_rng(20158)
    started = time.perf_counter()
    for _ in range(200):
        matrix = rng.uniform(0.1, 200.0, (20, 158))
        db = FingerprintDatabase(matrix, tuple({} for _ in range(158)))
        q = rng.uniform(0.1, 200.0, 20)

        e_idx, e_dist = nearest_euclidean(q, db)
        o_idx, o_dist = nearest_by_scan(q, matrix)
        assert e_idx == o_idx
        assert e_dist == pytest.approx(o_dist, rel=1e-9)

        i_idx, i_score = nearest_inner_product(q, db)
        oi_idx, oi_score = nearest_inner_by_scan(q, matrix)
        assert i_idx == oi_idx
        assert i_score == pytest.approx(oi_score, rel=1e-9)

        cov = estimate_covariance(db)
        m_idx, m_dist = nearest_mahalanobis(
            q, SimilarityModel(database=db, covariance=cov))
        om_idx, om_dist = nearest_mahalanobis_by_solve(q, matrix, cov)
        assert m_idx == om_idx
        assert m_dist == pytest.approx(om_dist, rel=1e-9)
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"took {elapsed:.1f}s"
    _passed(f"matching oracle equivalence (200 instances in {elapsed:.1f}s)")


def test_identity_covariance_collapse():
    """Mahalanobis with identity covariance equals Euclidean distance within
    1e-9 on 1000 random vector pairs."""
    rng = np.random.default_rng(77)
    eye = np.eye(20)
    for _ in range(1000):
        a = rng.uniform(0.0, 300.0, 20)
        b = rng.uniform(0.0, 300.0, 20)
        db = FingerprintDatabase(a[:, None], ({},))
        model = SimilarityModel(database=db, covariance=eye)
        _, m_dist = nearest_mahalanobis(b, model)
        _, e_dist = nearest_euclidean(b, db)
        assert abs(m_dist - e_dist) <= 1e-9
    _passed("identity-covariance collapse (1000 pairs within 1e-9)")


def test_pca_isometry_and_reconstruction():
    """k=N projection preserves every nearest-neighbor decision on 100
    random queries; rank-r data with k=r reconstructs within 1e-8."""
    rng = np.random.default_rng(555)
    matrix = rng.uniform(0.1, 200.0, (20, 158))
    db = FingerprintDatabase(matrix, tuple({} for _ in range(158)))
    model = fit_model(db, pca_k=20)
    for _ in range(100):
        q = rng.uniform(0.1, 200.0, 20)
        assert nearest_pca(q, model)[0] == nearest_euclidean(q, db)[0]

    r = 4
    directions = np.linalg.qr(rng.normal(size=(20, r)))[0]
    coeffs = rng.normal(scale=3.0, size=(r, 60))
    low_rank = np.abs(directions @ coeffs + 100.0)
    db_r = FingerprintDatabase(low_rank, tuple({} for _ in range(60)))
    basis = fit_pca(db_r, r)
    worst = 0.0
    for j in range(db_r.m):
        x = db_r.column(j)
        err = float(np.abs(basis.reconstruct(basis.project(x)) - x).max())
        worst = max(worst, err)
    assert worst < 1e-8, f"reconstruction error {worst:.3e}"
    _passed(f"PCA isometry + rank-{r} reconstruction (worst err {worst:.1e})")


def test_classifier_reproduction_at_published_values():
    """The four anchor ratio pairs classify exactly as published under
    thresholds (3.05, 3.10), including the one firefox false positive."""
    cases = [
        (SetterRatios(5.59, 6.21), True),    # chromium-engine means
        (SetterRatios(1.67, 1.98), False),   # firefox means
        (SetterRatios(2.82, 3.10), False),   # firefox 95th pct: SS1 fails
        (SetterRatios(4.31, 12.30), True),   # firefox max: false positive
    ]
    for ratios, expected in cases:
        verdict = is_chromium(ratios, PAPER_THRESHOLDS)
        assert verdict.is_chromium is expected, ratios
    _passed("classifier reproduction at published anchor ratios (4/4 exact)")


def test_synthetic_end_to_end_accuracy():
    """simulate(87 chromium-class, 55 firefox-class) -> evaluate at the
    published thresholds reaches accuracy >= 0.95 on >= 95 of 100 seeds,
    in < 30 s."""
    profiles = builtin_profiles()
    counts = resolve_counts(profiles, [87, 55])
    started = time.perf_counter()
    passing = 0
    accuracies = []
    for seed in range(100):
        db = sample_dataset(profiles, counts, seed=seed)
        labeled = labeled_ratios_from_database(db)
        assert len(labeled) == 142
        acc = evaluate(labeled, PAPER_THRESHOLDS).accuracy
        accuracies.append(acc)
        if acc >= 0.95:
            passing += 1
    elapsed = time.perf_counter() - started
    assert passing >= 95, f"only {passing}/100 seeds reached 0.95"
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    _passed(f"synthetic end-to-end ({passing}/100 seeds >= 0.95, "
            f"mean acc {np.mean(accuracies):.4f}, {elapsed:.1f}s)")


def test_wasm_emission_contract():
    """All 20 modules: fixed preamble, structural validation, harness export
    names present, and bit-identical output across two interpreter runs."""
    preamble = bytes.fromhex("0061736d01000000")
    digests = {}
    for desc in catalog():
        blob = emit_module(desc.id)
        assert blob.bytes[:8] == preamble, f"test {desc.id}"
        report = validate_module(blob)
        assert report.ok, f"test {desc.id}: {report.defects}"
        assert set(desc.required_exports) <= set(report.exports)
        digests[desc.id] = hashlib.sha256(blob.bytes).hexdigest()

    assert "callCosInLoop" in emit_module(1).exports
    assert "set_global_one" in emit_module(11).exports
    assert "set_global_two" in emit_module(12).exports

    # second run: a fresh interpreter must emit identical bytes
    script = ("import hashlib, json\n"
              "from wasmfp.wasmgen import emit_module\n"
              "print(json.dumps({k: hashlib.sha256(emit_module(k).bytes)"
              ".hexdigest() for k in range(1, 21)}))\n")
    proc = subprocess.run([sys.executable, "-c", script],
                          capture_output=True, text=True, check=True)
    fresh = {int(k): v for k, v in json.loads(proc.stdout).items()}
    assert fresh == digests
    _passed("wasm emission (20 modules valid, exports present, "
            "bit-identical across runs)")


def test_service_round_trip(tmp_path):
    """POST a 20-value fingerprint and read it back field-identical; a
    19-value body is a 422; a spoofed-UA record with chromium-level ratios
    stores is_chromium=true."""
    index = name_to_index()
    config = ServiceConfig(store_path=tmp_path / "records.jsonl",
                           thresholds=PAPER_THRESHOLDS)
    client = TestClient(create_app(config))

    timings = [12.0 + i * 0.25 for i in range(20)]
    body = {
        "session": "acceptance",
        "test_names": [t.name for t in catalog()],
        "timings_ms": timings,
        "user_agent": "probe/1.0",
        "client_hint": {"run": 1},
    }
    resp = client.post("/api/fingerprint", json=body)
    assert resp.status_code == 201
    stored = client.get(f"/api/fingerprints/{resp.json()['id']}").json()
    for field in ("session", "test_names", "timings_ms", "user_agent",
                  "client_hint"):
        assert stored[field] == body[field], field

    short = dict(body, timings_ms=timings[:19], test_names=None)
    short.pop("test_names")
    assert client.post("/api/fingerprint", json=short).status_code == 422

    spoofed = [10.0] * 20
    spoofed[index["scripted-setter-1"]] = 55.9   # SS1/SG0 = 5.59
    spoofed[index["scripted-setter-2"]] = 62.1   # SS2/SG0 = 6.21
    resp = client.post("/api/fingerprint", json={
        "session": "spoof",
        "timings_ms": spoofed,
        "user_agent": "Mozilla/5.0 (X11; rv:33.0) Gecko/20100101 Firefox/33.0",
    })
    record = client.get(f"/api/fingerprints/{resp.json()['id']}").json()
    assert record["verdict"]["is_chromium"] is True
    assert "Firefox/33.0" in record["user_agent"]
    _passed("service round-trip (echo, 422 on short vector, spoof exposed)")
