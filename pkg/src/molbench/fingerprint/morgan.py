"""Circular (Morgan/ECFP-style) fingerprints.

Atom environments are hashed with FNV-1a-64 over a pinned ASCII serialization
of the invariant tuple (element, charge, degree, H count, ring flag), then
iteratively extended with sorted (bond kind, neighbor invariant) pairs and
folded modulo the bit width. All arithmetic is 64-bit modular Python int
math, so bitsets are identical across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..chem.graph import MolecularGraph
from .kernels import popcount_words

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF

DEFAULT_RADIUS = 2
DEFAULT_WIDTH = 2048


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK
    return h


@dataclass(frozen=True)
class Fingerprint:
    words: np.ndarray  # little-endian uint64 words, width/64 entries
    width: int
    radius: int
    source_id: int = -1

    def __post_init__(self):
        object.__setattr__(self, "words", np.ascontiguousarray(self.words, dtype=np.uint64))
        self.words.setflags(write=False)

    @property
    def popcount(self) -> int:
        return popcount_words(self.words)

    def bits(self) -> list[int]:
        out = []
        for w, word in enumerate(self.words.tolist()):
            while word:
                low = word & -word
                out.append(w * 64 + low.bit_length() - 1)
                word ^= low
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, Fingerprint)
                and self.width == other.width
                and bool(np.array_equal(self.words, other.words)))

    def __hash__(self):
        return hash((self.width, self.words.tobytes()))


def morgan_fingerprint(graph: MolecularGraph, radius: int = DEFAULT_RADIUS,
                       width: int = DEFAULT_WIDTH, source_id: int = -1) -> Fingerprint:
    """Deterministic circular fingerprint of ``graph``."""
    if width % 64 != 0 or width <= 0:
        raise ValueError("width must be a positive multiple of 64")
    n = len(graph.atoms)
    invariants = []
    for idx, atom in enumerate(graph.atoms):
        blob = (f"{atom.element}|{atom.formal_charge}|{graph.degree(idx)}"
                f"|{graph.total_h(idx)}|{int(atom.ring_member)}").encode()
        invariants.append(_fnv1a(blob))

    words = [0] * (width // 64)

    def set_bit(value: int):
        bit = value % width
        words[bit >> 6] |= 1 << (bit & 63)

    for inv in invariants:
        set_bit(inv)
    current = invariants
    for r in range(1, radius + 1):
        nxt = []
        for idx in range(n):
            neighborhood = sorted(
                (graph.bond_between(idx, nbr).order, current[nbr])
                for nbr in graph.neighbors(idx)
            )
            blob = f"{r}|{current[idx]}" + "".join(
                f"|{order},{inv}" for order, inv in neighborhood
            )
            nxt.append(_fnv1a(blob.encode()))
        for inv in nxt:
            set_bit(inv)
        current = nxt

    return Fingerprint(np.array(words, dtype=np.uint64), width, radius, source_id)
