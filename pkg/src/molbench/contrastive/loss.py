"""The contrastive objective: cosine similarity, NT-Xent, combined loss.

NT-Xent here follows the SimCLR convention: every one of the 2N vectors in a
batch serves as an anchor against its positive partner, normalized by all
2N-1 other vectors, averaged with the 1/(2N) factor. A single pair (N=1) has
no negatives, so the loss is exactly zero; as the temperature grows the loss
approaches log(2N-1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, NonFinite, ZeroVector

DEFAULT_TAU = 0.5
DEFAULT_LAMBDA = 1.0
_NORM_TOLERANCE = 1e-6


def cosine_sim(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine similarity undefined for zero vectors")
    return float(np.dot(a, b) / (norm_a * norm_b))


@dataclass(frozen=True)
class EmbeddingBatch:
    """2N unit-norm vectors with an involutive positive-pair map."""

    vectors: np.ndarray       # (2N, d)
    pair_of: tuple[int, ...]  # pair_of[i] = j and pair_of[j] = i, i != j

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.float64)
        object.__setattr__(self, "vectors", vectors)
        if vectors.ndim != 2 or vectors.shape[0] < 2 or vectors.shape[0] % 2:
            raise ValueError("vectors must be (2N, d) with N >= 1")
        count = vectors.shape[0]
        if len(self.pair_of) != count:
            raise ValueError("pair_of must cover every vector")
        for i, j in enumerate(self.pair_of):
            if j == i or not (0 <= j < count) or self.pair_of[j] != i:
                raise ValueError("pair_of must be an involution without fixed points")
        norms = np.linalg.norm(vectors, axis=1)
        if np.any(np.abs(norms - 1.0) > _NORM_TOLERANCE):
            raise ValueError("vectors must be unit-norm within 1e-6")

    @property
    def n_pairs(self) -> int:
        return self.vectors.shape[0] // 2

    @classmethod
    def from_pairs(cls, left: np.ndarray, right: np.ndarray) -> "EmbeddingBatch":
        """Stack N (left, right) positive pairs into the 2N batch layout."""
        left = np.asarray(left, dtype=np.float64)
        right = np.asarray(right, dtype=np.float64)
        if left.shape != right.shape:
            raise DimensionMismatch("pair blocks must share a shape")
        n = left.shape[0]
        vectors = np.vstack([left, right])
        pair_of = tuple(list(range(n, 2 * n)) + list(range(n)))
        return cls(vectors, pair_of)


def ntxent_loss(batch: EmbeddingBatch, tau: float = DEFAULT_TAU) -> float:
    """Normalized temperature-scaled cross entropy over the batch."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    z = batch.vectors
    count = z.shape[0]
    sims = (z @ z.T) / tau
    total = 0.0
    for anchor in range(count):
        positive = batch.pair_of[anchor]
        row = np.delete(sims[anchor], anchor)
        peak = float(np.max(row))
        log_denominator = peak + float(np.log(np.sum(np.exp(row - peak))))
        total += sims[anchor, positive] - log_denominator
    return float(-total / count)


def total_loss(task_loss: float, contrastive_loss: float,
               weight: float = DEFAULT_LAMBDA) -> float:
    """task + weight * contrastive (the combined training objective)."""
    if weight < 0:
        raise ValueError("contrastive weight must be >= 0")
    for name, value in (("task_loss", task_loss),
                        ("contrastive_loss", contrastive_loss)):
        if not np.isfinite(value):
            raise NonFinite(f"{name} is not finite: {value}")
    result = task_loss + weight * contrastive_loss
    if not np.isfinite(result):
        raise NonFinite(f"combined loss overflowed: {result}")
    return float(result)
