"""Distance-scan kernels with backend selection at import time.

The compiled Cython backend is preferred; the numpy fallback is used when
the extension was not built or WASMFP_PURE_PYTHON is set (any non-empty
value). Both expose the same three functions over C-contiguous float64
arrays; results agree to floating-point roundoff.
"""

import os

from . import _distpy

if os.environ.get("WASMFP_PURE_PYTHON"):
    _impl = _distpy
    BACKEND = "numpy"
else:
    try:
        from . import _distcy as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _distpy
        BACKEND = "numpy"

sq_euclidean_scan = _impl.sq_euclidean_scan
inner_product_scan = _impl.inner_product_scan
mahalanobis_sq_scan = _impl.mahalanobis_sq_scan

__all__ = [
    "BACKEND",
    "inner_product_scan",
    "mahalanobis_sq_scan",
    "sq_euclidean_scan",
]
