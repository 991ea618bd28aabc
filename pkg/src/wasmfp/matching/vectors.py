"""Fingerprint vectors, the fingerprint database, and the similarity model.

A fingerprint is an ordered vector of per-test timings in milliseconds.
The database stores known fingerprints as the columns of an (n, m) matrix
with one metadata label per column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def as_vector(values, n: int | None = None) -> np.ndarray:
    """Coerce to a float64 fingerprint vector and enforce its invariants."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"fingerprint must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("fingerprint contains non-finite values")
    if np.any(v < 0):
        raise ValueError("fingerprint contains negative timings")
    if n is not None and v.shape[0] != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {v.shape[0]}")
    return v


@dataclass(eq=False)
class FingerprintDatabase:
    """Known fingerprints as matrix columns, plus one label per column."""

    matrix: np.ndarray
    labels: tuple[dict, ...]
    test_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        m = np.ascontiguousarray(np.asarray(self.matrix, dtype=np.float64))
        if m.ndim != 2:
            raise ValueError("database matrix must be two-dimensional")
        if not np.all(np.isfinite(m)):
            raise ValueError("database contains non-finite values")
        if np.any(m < 0):
            raise ValueError("database contains negative timings")
        self.matrix = m
        self.labels = tuple(dict(lbl) for lbl in self.labels)
        if len(self.labels) != m.shape[1]:
            raise ValueError(
                f"labels length {len(self.labels)} does not match "
                f"column count {m.shape[1]}")
        if self.test_names is None:
            self.test_names = tuple(f"test-{i + 1:02d}" for i in range(m.shape[0]))
        else:
            self.test_names = tuple(self.test_names)
            if len(self.test_names) != m.shape[0]:
                raise ValueError("test_names length does not match dimension")
        # candidate-per-row layout for the scan kernels
        self._rows = np.ascontiguousarray(m.T)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    def column(self, index: int) -> np.ndarray:
        return self.matrix[:, index].copy()


@dataclass(eq=False)
class PcaBasis:
    """Mean vector, orthonormal projection rows, and per-row variance share."""

    mean: np.ndarray
    components: np.ndarray  # (k, n)
    explained_variance_ratio: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.components = np.asarray(self.components, dtype=np.float64)
        self.explained_variance_ratio = np.asarray(
            self.explained_variance_ratio, dtype=np.float64)
        k, n = self.components.shape
        if not 1 <= k <= n:
            raise ValueError(f"retained dimension must be in 1..{n}, got {k}")
        gram = self.components @ self.components.T
        if not np.allclose(gram, np.eye(k), atol=1e-9):
            raise ValueError("projection rows are not orthonormal")

    @property
    def k(self) -> int:
        return self.components.shape[0]

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.components @ (x - self.mean)

    def reconstruct(self, z: np.ndarray) -> np.ndarray:
        return self.components.T @ z + self.mean


@dataclass(eq=False)
class SimilarityModel:
    """A database plus optional covariance and PCA basis for matching."""

    database: FingerprintDatabase
    covariance: np.ndarray | None = None
    pca_basis: PcaBasis | None = None
    _chol: np.ndarray | None = field(default=None, repr=False)
    _projected_rows: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.covariance is not None:
            c = np.asarray(self.covariance, dtype=np.float64)
            n = self.database.n
            if c.shape != (n, n):
                raise ValueError(
                    f"covariance shape {c.shape} does not match dimension {n}")
            if not np.allclose(c, c.T, atol=1e-9):
                raise ValueError("covariance is not symmetric within 1e-9")
            self.covariance = c
        if self.pca_basis is not None and \
                self.pca_basis.components.shape[1] != self.database.n:
            raise ValueError("PCA basis dimension does not match database")

    def cholesky(self) -> np.ndarray:
        """Lower Cholesky factor of the covariance; cached after first use.

        Raises ValueError naming the offending eigenvalue when the
        covariance is not positive definite.
        """
        if self.covariance is None:
            raise ValueError("model has no covariance")
        if self._chol is None:
            try:
                self._chol = np.linalg.cholesky(self.covariance)
            except np.linalg.LinAlgError:
                eigvals = np.linalg.eigvalsh(self.covariance)
                worst = int(np.argmin(eigvals))
                raise ValueError(
                    f"covariance is not positive definite: eigenvalue "
                    f"{worst} is {eigvals[worst]:.6e}") from None
        return self._chol

    def projected_rows(self) -> np.ndarray:
        """Database candidates projected into the PCA subspace, one per row."""
        if self.pca_basis is None:
            raise ValueError("model has no PCA basis")
        if self._projected_rows is None:
            centered = self.database.rows - self.pca_basis.mean
            self._projected_rows = np.ascontiguousarray(
                centered @ self.pca_basis.components.T)
        return self._projected_rows


def database_to_dict(db: FingerprintDatabase) -> dict:
    """Serialize with the fixed field order: n, tests, columns."""
    return {
        "n": db.n,
        "tests": list(db.test_names),
        "columns": [
            {"label": dict(db.labels[i]), "values": db.matrix[:, i].tolist()}
            for i in range(db.m)
        ],
    }


def database_from_dict(doc: dict) -> FingerprintDatabase:
    n = int(doc["n"])
    tests = [str(t) for t in doc["tests"]]
    if len(tests) != n:
        raise ValueError(f"tests length {len(tests)} does not match n={n}")
    columns = doc["columns"]
    matrix = np.empty((n, len(columns)), dtype=np.float64)
    labels = []
    for j, col in enumerate(columns):
        values = col["values"]
        if len(values) != n:
            raise ValueError(f"column {j} has {len(values)} values, expected {n}")
        matrix[:, j] = values
        labels.append(dict(col.get("label", {})))
    return FingerprintDatabase(matrix=matrix, labels=tuple(labels),
                               test_names=tuple(tests))


def save_database(db: FingerprintDatabase, path: str | Path) -> None:
    Path(path).write_text(json.dumps(database_to_dict(db)), encoding="utf-8")


def load_database(path: str | Path) -> FingerprintDatabase:
    return database_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
