"""numpy implementations of the distance-scan kernels.

Fallback backend used when the compiled extension is unavailable (or when
WASMFP_PURE_PYTHON is set). `rows` is the fingerprint matrix transposed to
(m, n) so each candidate is one contiguous row.
"""

from __future__ import annotations

import numpy as np


def sq_euclidean_scan(rows: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Squared L2 distance from q to every row."""
    d = rows - q
    return np.einsum("ij,ij->i", d, d)


def inner_product_scan(rows: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Per-row value of (-2 q.a + a.a); same argmin as squared distance."""
    return np.einsum("ij,ij->i", rows, rows) - 2.0 * (rows @ q)


def mahalanobis_sq_scan(rows: np.ndarray, q: np.ndarray,
                        chol_lower: np.ndarray) -> np.ndarray:
    """Squared Mahalanobis distance per row, given the lower Cholesky
    factor of the covariance: ||L^-1 (q - a)||^2."""
    diffs = q[:, None] - rows.T
    y = np.linalg.solve(chol_lower, diffs)
    return np.einsum("ij,ij->j", y, y)
