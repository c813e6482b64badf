"""Kernel selection: compiled popcount extension with a numpy fallback.

The compiled path is chosen at import when the extension built; setting
MOLBENCH_NO_EXT=1 forces the numpy path (used by the benchmark and tests).
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - availability depends on the build environment
    from . import _bitops as _c
except ImportError:  # pragma: no cover
    _c = None

_FORCE_FALLBACK = os.environ.get("MOLBENCH_NO_EXT", "") not in ("", "0")


def kernel_name() -> str:
    return "numpy" if (_c is None or _FORCE_FALLBACK) else "c"


def popcount_words(words: np.ndarray) -> int:
    if _c is not None and not _FORCE_FALLBACK:
        return _c.popcount_buffer(np.ascontiguousarray(words).data)
    return int(np.bitwise_count(words).sum())


def bulk_tanimoto(query: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Tanimoto of ``query`` (n_words,) against every row of ``matrix``."""
    n_rows, n_words = matrix.shape
    if n_rows == 0:
        return np.zeros(0, dtype=np.float64)
    if _c is not None and not _FORCE_FALLBACK:
        raw = _c.bulk_tanimoto(
            np.ascontiguousarray(query).data,
            np.ascontiguousarray(matrix).data,
            n_rows,
            n_words,
        )
        return np.frombuffer(raw, dtype=np.float64).copy()
    inter = np.bitwise_count(matrix & query).sum(axis=1, dtype=np.int64)
    pops = np.bitwise_count(matrix).sum(axis=1, dtype=np.int64)
    q_pop = int(np.bitwise_count(query).sum())
    union = pops + q_pop - inter
    scores = np.zeros(n_rows, dtype=np.float64)
    nonzero = union > 0
    scores[nonzero] = inter[nonzero] / union[nonzero]
    return scores


def pairwise_tanimoto(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise Tanimoto between equal-shape word matrices."""
    n_pairs, n_words = a.shape
    if n_pairs == 0:
        return np.zeros(0, dtype=np.float64)
    if _c is not None and not _FORCE_FALLBACK:
        raw = _c.pairwise_tanimoto(
            np.ascontiguousarray(a).data,
            np.ascontiguousarray(b).data,
            n_pairs,
            n_words,
        )
        return np.frombuffer(raw, dtype=np.float64).copy()
    inter = np.bitwise_count(a & b).sum(axis=1, dtype=np.int64)
    union = np.bitwise_count(a | b).sum(axis=1, dtype=np.int64)
    scores = np.zeros(n_pairs, dtype=np.float64)
    nonzero = union > 0
    scores[nonzero] = inter[nonzero] / union[nonzero]
    return scores
