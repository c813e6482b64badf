"""Molecular graph types: the single source of truth for a parsed molecule.

Graphs are immutable after construction and safe to share across threads;
all downstream stages (fingerprints, depiction, SELFIES) consume this form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

BOND_SINGLE = 1
BOND_DOUBLE = 2
BOND_TRIPLE = 3
BOND_AROMATIC = 4

# Numeric contribution of each bond kind to an atom's valence sum.
# Aromatic bonds count 1; the pi allowance is handled by the valence model.
BOND_ORDER_SUM = {BOND_SINGLE: 1, BOND_DOUBLE: 2, BOND_TRIPLE: 3, BOND_AROMATIC: 1}

BOND_SMILES = {BOND_SINGLE: "", BOND_DOUBLE: "=", BOND_TRIPLE: "#", BOND_AROMATIC: ""}


@dataclass(frozen=True)
class Atom:
    element: str
    formal_charge: int = 0
    aromatic: bool = False
    explicit_h: Optional[int] = None  # None: implicit, computed from valence model
    isotope: Optional[int] = None
    ring_member: bool = False
    # Parsed-but-inert annotations (stereo marks); ignored by canonicalization.
    chirality: Optional[str] = None

    def __post_init__(self):
        if self.explicit_h is not None and self.explicit_h < 0:
            raise ValueError("explicit_h must be >= 0")


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: int = BOND_SINGLE
    # '/' or '\\' directional annotation from the source text, if any.
    direction: Optional[str] = None

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("bond endpoints must be distinct")

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)


class MolecularGraph:
    """Atoms, bonds, per-atom implicit hydrogen counts, adjacency."""

    __slots__ = ("atoms", "bonds", "source_text", "implicit_h", "_adj", "_bond_of")

    def __init__(self, atoms: list[Atom], bonds: list[Bond],
                 implicit_h: list[int], source_text: str = ""):
        if len(implicit_h) != len(atoms):
            raise ValueError("implicit_h length must match atoms")
        self.atoms = tuple(atoms)
        self.bonds = tuple(bonds)
        self.implicit_h = tuple(implicit_h)
        self.source_text = source_text
        adj: list[list[int]] = [[] for _ in atoms]
        bond_of: dict[tuple[int, int], Bond] = {}
        for bond in bonds:
            if not (0 <= bond.a < len(atoms) and 0 <= bond.b < len(atoms)):
                raise ValueError("bond endpoint out of range")
            if bond.key in bond_of:
                raise ValueError(f"parallel bond between atoms {bond.key}")
            if bond.order == BOND_AROMATIC:
                if not (atoms[bond.a].aromatic and atoms[bond.b].aromatic):
                    raise ValueError("aromatic bond between non-aromatic atoms")
            bond_of[bond.key] = bond
            adj[bond.a].append(bond.b)
            adj[bond.b].append(bond.a)
        self._adj = tuple(tuple(n) for n in adj)
        self._bond_of = bond_of

    def __len__(self) -> int:
        return len(self.atoms)

    def neighbors(self, idx: int) -> tuple[int, ...]:
        return self._adj[idx]

    def degree(self, idx: int) -> int:
        return len(self._adj[idx])

    def bond_between(self, a: int, b: int) -> Optional[Bond]:
        return self._bond_of.get((a, b) if a < b else (b, a))

    def total_h(self, idx: int) -> int:
        """Effective hydrogen count: explicit if given, implicit otherwise."""
        explicit = self.atoms[idx].explicit_h
        return explicit if explicit is not None else self.implicit_h[idx]

    def bond_order_sum(self, idx: int) -> int:
        return sum(BOND_ORDER_SUM[self.bond_between(idx, n).order]
                   for n in self._adj[idx])

    def fragments(self) -> list[list[int]]:
        """Connected components, each as a sorted atom index list."""
        seen = [False] * len(self.atoms)
        out = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                cur = stack.pop()
                comp.append(cur)
                for nxt in self._adj[cur]:
                    if not seen[nxt]:
                        seen[nxt] = True
                        stack.append(nxt)
            out.append(sorted(comp))
        return out

    def ring_bonds(self) -> set[tuple[int, int]]:
        """Bond keys that lie on a cycle (computed by bridge elimination)."""
        bridges = self._bridges()
        return {b.key for b in self.bonds if b.key not in bridges}

    def relabel(self, mapping: list[int]) -> "MolecularGraph":
        """New graph with atom i moved to index mapping[i]."""
        n = len(self.atoms)
        atoms: list = [None] * n
        implicit = [0] * n
        for old, new in enumerate(mapping):
            atoms[new] = self.atoms[old]
            implicit[new] = self.implicit_h[old]
        bonds = [Bond(mapping[b.a], mapping[b.b], b.order, b.direction)
                 for b in self.bonds]
        return MolecularGraph(atoms, bonds, implicit, self.source_text)

    def _bridges(self) -> set[tuple[int, int]]:
        n = len(self.atoms)
        disc = [-1] * n
        low = [0] * n
        bridges: set[tuple[int, int]] = set()
        timer = 0
        for root in range(n):
            if disc[root] != -1:
                continue
            stack: list[tuple[int, int, int]] = [(root, -1, 0)]
            while stack:
                node, parent, state = stack.pop()
                if state == 0:
                    if disc[node] != -1:
                        continue  # reached through another edge already
                    disc[node] = low[node] = timer
                    timer += 1
                    stack.append((node, parent, 1))
                    for nxt in self._adj[node]:
                        if disc[nxt] == -1:
                            stack.append((nxt, node, 0))
                else:
                    for nxt in self._adj[node]:
                        if nxt == parent:
                            continue
                        low[node] = min(low[node], low[nxt] if disc[nxt] > disc[node] else disc[nxt])
                    if parent != -1 and low[node] > disc[parent]:
                        key = (parent, node) if parent < node else (node, parent)
                        bridges.add(key)
        return bridges
