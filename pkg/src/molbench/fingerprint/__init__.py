"""Circular fingerprints, Tanimoto similarity, and the scan index."""

from .index_io import load_index, save_index
from .kernels import kernel_name
from .morgan import DEFAULT_RADIUS, DEFAULT_WIDTH, Fingerprint, morgan_fingerprint
from .similarity import (
    T_AUG_POSITIVES,
    T_AUG_THRESHOLD,
    PositivePair,
    SimilarityIndex,
    mine_tanimoto_positives,
    tanimoto,
    top_k_similar,
)

__all__ = [
    "Fingerprint",
    "morgan_fingerprint",
    "DEFAULT_RADIUS",
    "DEFAULT_WIDTH",
    "tanimoto",
    "top_k_similar",
    "mine_tanimoto_positives",
    "SimilarityIndex",
    "PositivePair",
    "T_AUG_THRESHOLD",
    "T_AUG_POSITIVES",
    "save_index",
    "load_index",
    "kernel_name",
]
