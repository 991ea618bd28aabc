"""Nearest-neighbor matching of fingerprint vectors against a database.

Four interchangeable measures: plain Euclidean distance, its inner-product
expansion (same argmin, cheaper online), Mahalanobis distance under an
estimated covariance, and Euclidean distance in a PCA subspace. All argmins
break ties toward the lowest column index. Comparisons run on squared
distances; the square root is taken once at the end.
"""

from __future__ import annotations

import numpy as np

from .. import _kernels
from .vectors import FingerprintDatabase, PcaBasis, SimilarityModel, as_vector


def _check_query(b, db: FingerprintDatabase) -> np.ndarray:
    if db.m < 1:
        raise ValueError("database is empty")
    return as_vector(b, db.n)


def nearest_euclidean(b, db: FingerprintDatabase) -> tuple[int, float]:
    """Index of the column closest to b in L2, and that distance."""
    q = _check_query(b, db)
    sq = _kernels.sq_euclidean_scan(db.rows, q)
    idx = int(np.argmin(sq))
    return idx, float(np.sqrt(sq[idx]))


def nearest_inner_product(b, db: FingerprintDatabase) -> tuple[int, float]:
    """Same argmin as nearest_euclidean via the expansion that drops the
    constant ||b||^2; returns the minimized score (-2 b.a + a.a)."""
    q = _check_query(b, db)
    scores = _kernels.inner_product_scan(db.rows, q)
    idx = int(np.argmin(scores))
    return idx, float(scores[idx])


def estimate_covariance(db: FingerprintDatabase,
                        ridge: float | None = None) -> np.ndarray:
    """Unbiased sample covariance over columns plus a ridge term.

    ridge=None picks 1e-6 * trace/n, small but enough to keep near-singular
    databases positive definite; pass 0.0 to disable.
    """
    if db.m < 2:
        raise ValueError(f"need at least 2 columns to estimate covariance, got {db.m}")
    if ridge is not None and ridge < 0:
        raise ValueError("ridge must be non-negative")
    cov = np.cov(db.matrix, rowvar=True, ddof=1)
    cov = np.atleast_2d(cov)
    cov = (cov + cov.T) / 2.0  # kill BLAS roundoff asymmetry
    if ridge is None:
        # trace-relative, with an absolute floor so an all-constant
        # database still yields a positive-definite matrix
        ridge = max(1e-6 * float(np.trace(cov)) / db.n, 1e-12)
    if ridge > 0:
        cov = cov + ridge * np.eye(db.n)
    return cov


def nearest_mahalanobis(b, model: SimilarityModel) -> tuple[int, float]:
    """Argmin of sqrt((b-a_i)^T Sigma^-1 (b-a_i)) over columns.

    Sigma^-1 is applied through the Cholesky factor, never formed
    explicitly.
    """
    db = model.database
    q = _check_query(b, db)
    chol = model.cholesky()
    sq = _kernels.mahalanobis_sq_scan(db.rows, q, chol)
    idx = int(np.argmin(sq))
    return idx, float(np.sqrt(sq[idx]))


def fit_pca(db: FingerprintDatabase, k: int) -> PcaBasis:
    """Top-k principal directions of the centered columns.

    Rows of the returned projection are unit length, ordered by descending
    variance, with signs fixed so the largest-magnitude entry is positive.
    """
    if not 1 <= k <= db.n:
        raise ValueError(f"k must be in 1..{db.n}, got {k}")
    if db.m < 2:
        raise ValueError(f"need at least 2 columns to fit PCA, got {db.m}")
    mean = db.matrix.mean(axis=1)
    centered = db.matrix - mean[:, None]
    u, s, _ = np.linalg.svd(centered, full_matrices=True)
    # deterministic sign: largest-|.| entry of each direction positive
    flip = np.sign(u[np.argmax(np.abs(u), axis=0), np.arange(u.shape[1])])
    flip[flip == 0] = 1.0
    u = u * flip
    variances = np.zeros(db.n)
    variances[:s.shape[0]] = s**2 / (db.m - 1)
    total = variances.sum()
    ratios = variances[:k] / total if total > 0 else np.zeros(k)
    if ratios.sum() > 1.0:  # roundoff when k spans the full basis
        ratios = ratios / ratios.sum()
    return PcaBasis(mean=mean, components=u[:, :k].T,
                    explained_variance_ratio=ratios)


def nearest_pca(b, model: SimilarityModel) -> tuple[int, float]:
    """Euclidean argmin after projecting b and all columns with the model's
    PCA basis."""
    db = model.database
    q = _check_query(b, db)
    basis = model.pca_basis
    if basis is None:
        raise ValueError("model has no PCA basis")
    zq = basis.project(q)
    sq = _kernels.sq_euclidean_scan(model.projected_rows(),
                                    np.ascontiguousarray(zq))
    idx = int(np.argmin(sq))
    return idx, float(np.sqrt(sq[idx]))


def fit_model(db: FingerprintDatabase, ridge: float | None = None,
              pca_k: int | None = None) -> SimilarityModel:
    """Build a SimilarityModel with covariance and optional PCA basis."""
    basis = fit_pca(db, pca_k) if pca_k is not None else None
    return SimilarityModel(database=db,
                           covariance=estimate_covariance(db, ridge),
                           pca_basis=basis)
