"""Contrastive adaptation signals: the loss and positive-pair mining."""

from .loss import (
    DEFAULT_LAMBDA,
    DEFAULT_TAU,
    EmbeddingBatch,
    cosine_sim,
    ntxent_loss,
    total_loss,
)
from .pairs import AUG, T_AUG, PairEntry, PairManifest, build_pair_manifest

__all__ = [
    "cosine_sim",
    "ntxent_loss",
    "total_loss",
    "EmbeddingBatch",
    "DEFAULT_TAU",
    "DEFAULT_LAMBDA",
    "PairEntry",
    "PairManifest",
    "build_pair_manifest",
    "AUG",
    "T_AUG",
]
