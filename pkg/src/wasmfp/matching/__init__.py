"""Fingerprint vector model and nearest-neighbor similarity matching."""

from .similarity import (
    estimate_covariance,
    fit_model,
    fit_pca,
    nearest_euclidean,
    nearest_inner_product,
    nearest_mahalanobis,
    nearest_pca,
)
from .vectors import (
    FingerprintDatabase,
    PcaBasis,
    SimilarityModel,
    as_vector,
    database_from_dict,
    database_to_dict,
    load_database,
    save_database,
)

__all__ = [
    "FingerprintDatabase",
    "PcaBasis",
    "SimilarityModel",
    "as_vector",
    "database_from_dict",
    "database_to_dict",
    "estimate_covariance",
    "fit_model",
    "fit_pca",
    "load_database",
    "nearest_euclidean",
    "nearest_inner_product",
    "nearest_mahalanobis",
    "nearest_pca",
    "save_database",
]
