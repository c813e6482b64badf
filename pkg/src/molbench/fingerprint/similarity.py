"""Tanimoto similarity, the scan index, and positive-pair mining."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..errors import WidthMismatch
from .kernels import bulk_tanimoto, popcount_words
from .morgan import Fingerprint

T_AUG_THRESHOLD = 0.85
T_AUG_POSITIVES = 3


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a AND b| / |a OR b|; 0.0 when both sets are empty."""
    if a.width != b.width:
        raise WidthMismatch(f"fingerprint widths differ: {a.width} vs {b.width}")
    inter = popcount_words(a.words & b.words)
    union = popcount_words(a.words | b.words)
    return inter / union if union else 0.0


@dataclass(frozen=True)
class PositivePair:
    anchor_id: int
    positive_id: int
    similarity: float
    strategy: str  # "Aug" or "T-Aug"


class SimilarityIndex:
    """Immutable exact-scan index over fingerprints, dedup by canonical key."""

    def __init__(self, width: int, radius: int):
        self.width = width
        self.radius = radius
        self._ids: list[int] = []
        self._id_set: set[int] = set()
        self._rows: list[np.ndarray] = []
        self._keys: set[str] = set()
        self._matrix: Optional[np.ndarray] = None

    def add(self, mol_id: int, fingerprint: Fingerprint,
            canonical: Optional[str] = None) -> bool:
        """Add an entry; returns False when the canonical key is a duplicate."""
        if fingerprint.width != self.width:
            raise WidthMismatch(
                f"index width {self.width}, fingerprint width {fingerprint.width}")
        if mol_id in self._id_set:
            raise ValueError(f"duplicate molecule id {mol_id}")
        if canonical is not None:
            if canonical in self._keys:
                return False
            self._keys.add(canonical)
        self._ids.append(mol_id)
        self._id_set.add(mol_id)
        self._rows.append(fingerprint.words)
        self._matrix = None
        return True

    @classmethod
    def build(cls, entries: Iterable[tuple[int, Fingerprint]],
              width: int = 2048, radius: int = 2) -> "SimilarityIndex":
        index = cls(width, radius)
        for mol_id, fingerprint in entries:
            index.add(mol_id, fingerprint)
        return index

    def __len__(self) -> int:
        return len(self._ids)

    @property
    def ids(self) -> list[int]:
        return list(self._ids)

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            if self._rows:
                self._matrix = np.vstack(self._rows)
            else:
                self._matrix = np.zeros((0, self.width // 64), dtype=np.uint64)
        return self._matrix

    def row(self, position: int) -> np.ndarray:
        return self.matrix()[position]

    def scores_for(self, query: Fingerprint) -> np.ndarray:
        if query.width != self.width:
            raise WidthMismatch(
                f"index width {self.width}, query width {query.width}")
        return bulk_tanimoto(query.words, self.matrix())


def top_k_similar(query: Fingerprint, index: SimilarityIndex, k: int) -> list[tuple[int, float]]:
    """k most similar entries, descending score, ties by ascending id.

    The query's own id (``query.source_id``) is excluded.
    """
    if k <= 0:
        return []
    scores = index.scores_for(query)
    ranked = sorted(
        ((mol_id, float(score)) for mol_id, score in zip(index.ids, scores)
         if mol_id != query.source_id),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return ranked[:k]


def mine_tanimoto_positives(
    index: SimilarityIndex,
    threshold: float = T_AUG_THRESHOLD,
    m: int = T_AUG_POSITIVES,
) -> tuple[list[PositivePair], list[int]]:
    """Per anchor, up to ``m`` partners with score strictly above ``threshold``.

    Returns (pairs, skipped) where skipped lists anchors with no qualifying
    partner. Pairs are directed; mutual qualification yields both directions.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError("threshold must be in (0, 1]")
    ids = index.ids
    matrix = index.matrix()
    pairs: list[PositivePair] = []
    skipped: list[int] = []
    for position, anchor_id in enumerate(ids):
        scores = bulk_tanimoto(matrix[position], matrix)
        candidates = sorted(
            ((other_id, float(score)) for other_id, score in zip(ids, scores)
             if other_id != anchor_id and score > threshold),
            key=lambda pair: (-pair[1], pair[0]),
        )[:m]
        if not candidates:
            skipped.append(anchor_id)
            continue
        for other_id, score in candidates:
            pairs.append(PositivePair(anchor_id, other_id, score, "T-Aug"))
    return pairs, skipped
