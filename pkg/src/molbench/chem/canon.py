"""Canonical atom ranking and canonical SMILES output.

Ranking is Morgan-style iterative refinement over extended connectivity.
The canonical string is this package's internal canonical form: deterministic
and permutation-invariant, the dedup key for curation. It intentionally drops
stereo annotations, which canonicalization ignores.
"""

from __future__ import annotations

from typing import Iterator

from .elements import ORGANIC_SUBSET, implicit_hydrogens
from .graph import BOND_AROMATIC, BOND_DOUBLE, BOND_SINGLE, BOND_TRIPLE, MolecularGraph

_AROMATIC_ORGANIC = frozenset({"B", "C", "N", "O", "P", "S"})


def canonical_ranks(graph: MolecularGraph) -> list[int]:
    """Refinement equivalence classes, numbered 0..k-1 by invariant order.

    Atoms sharing a class are indistinguishable under iterated neighborhood
    refinement (symmetric positions share a rank; benzene is one class).
    """
    ranks = _initial_ranks(graph)
    ranks, _ = _refine(graph, ranks)
    return ranks


def _initial_ranks(graph: MolecularGraph) -> list[int]:
    keys = []
    for idx, atom in enumerate(graph.atoms):
        keys.append((
            atom.element,
            atom.formal_charge,
            atom.aromatic,
            graph.degree(idx),
            graph.total_h(idx),
            atom.isotope or 0,
            atom.ring_member,
        ))
    return _keys_to_ranks(keys)


def _refine(graph: MolecularGraph, ranks: list[int]) -> tuple[list[int], int]:
    n_classes = len(set(ranks))
    for _ in range(len(graph.atoms) + 1):
        keys = []
        for idx in range(len(graph.atoms)):
            neighborhood = sorted(
                (graph.bond_between(idx, nbr).order, ranks[nbr])
                for nbr in graph.neighbors(idx)
            )
            keys.append((ranks[idx], tuple(neighborhood)))
        new_ranks = _keys_to_ranks(keys)
        new_count = len(set(new_ranks))
        if new_count == n_classes:
            return new_ranks, n_classes
        ranks, n_classes = new_ranks, new_count
    return ranks, n_classes


def _keys_to_ranks(keys) -> list[int]:
    order = {key: rank for rank, key in enumerate(sorted(set(keys)))}
    return [order[key] for key in keys]


def canonical_labels(graph: MolecularGraph) -> list[int]:
    """Discrete canonical labeling: refinement plus tie-splitting.

    Ties left by refinement are split by promoting the lowest-index member of
    the lowest tied class; for molecular graphs such residual ties are
    automorphisms, so the emitted string does not depend on the choice.
    """
    ranks = canonical_ranks(graph)
    n = len(graph.atoms)
    while len(set(ranks)) < n:
        by_rank: dict[int, list[int]] = {}
        for idx, rank in enumerate(ranks):
            by_rank.setdefault(rank, []).append(idx)
        tied_rank = min(r for r, members in by_rank.items() if len(members) > 1)
        promoted = min(by_rank[tied_rank])
        keys = [(rank, 0 if idx == promoted else 1) for idx, rank in enumerate(ranks)]
        ranks, _ = _refine(graph, _keys_to_ranks(keys))
    return ranks


def write_canonical_smiles(graph: MolecularGraph) -> str:
    """Deterministic SMILES: isomorphic graphs yield identical strings."""
    if len(graph.atoms) == 0:
        return ""
    labels = canonical_labels(graph)
    fragments = sorted(graph.fragments(), key=lambda frag: min(labels[i] for i in frag))
    return ".".join(_write_fragment(graph, labels, frag) for frag in fragments)


def _write_fragment(graph: MolecularGraph, labels: list[int], fragment: list[int]) -> str:
    start = min(fragment, key=lambda i: labels[i])

    # First pass: depth-first tree (neighbors in label order); edges to
    # already-visited non-parents become ring closures.
    parent: dict[int, int] = {start: -1}
    children: dict[int, list[int]] = {i: [] for i in fragment}
    closures: list[tuple[int, int]] = []
    closure_keys: set[tuple[int, int]] = set()
    visited: set[int] = set()
    stack: list[tuple[int, Iterator[int]]] = [
        (start, iter(sorted(graph.neighbors(start), key=lambda nbr: labels[nbr])))
    ]
    visited.add(start)
    while stack:
        node, neighbors = stack[-1]
        advanced = False
        for nbr in neighbors:
            if nbr == parent[node]:
                continue
            if nbr in visited:
                key = (node, nbr) if node < nbr else (nbr, node)
                if key not in closure_keys:
                    closure_keys.add(key)
                    closures.append(key)
                continue
            visited.add(nbr)
            parent[nbr] = node
            children[node].append(nbr)
            stack.append(
                (nbr, iter(sorted(graph.neighbors(nbr), key=lambda n2: labels[n2])))
            )
            advanced = True
            break
        if not advanced:
            stack.pop()

    # Ring digit allocation in emission order.
    ring_digit: dict[tuple[int, int], int] = {}
    free_digits: list[int] = []
    next_digit = [1]

    def closure_edges_at(node: int) -> list[tuple[int, int]]:
        """Closure edges incident to node: closers first, then openers."""
        incident = [key for key in closures if node in key]
        closers = [k for k in incident if k in ring_digit]
        openers = [k for k in incident if k not in ring_digit]
        closers.sort(key=lambda k: ring_digit[k])
        openers.sort(key=lambda k: labels[k[0] if k[1] == node else k[1]])
        return closers + openers

    def digit_token(digit: int) -> str:
        return str(digit) if digit < 10 else f"%{digit:02d}"

    def bond_token(a: int, b: int) -> str:
        bond = graph.bond_between(a, b)
        if bond.order == BOND_DOUBLE:
            return "="
        if bond.order == BOND_TRIPLE:
            return "#"
        if bond.order == BOND_AROMATIC:
            return ""
        if graph.atoms[a].aromatic and graph.atoms[b].aromatic:
            return "-"  # explicit single between aromatic atoms
        return ""

    out: list[str] = []

    def emit(node: int, incoming: int):
        if incoming >= 0:
            out.append(bond_token(incoming, node))
        out.append(_atom_token(graph, node))
        for key in closure_edges_at(node):
            other = key[0] if key[1] == node else key[1]
            if key in ring_digit:
                digit = ring_digit.pop(key)
                free_digits.append(digit)
                free_digits.sort()
            else:
                if free_digits:
                    digit = free_digits.pop(0)
                else:
                    digit = next_digit[0]
                    next_digit[0] += 1
                ring_digit[key] = digit
            out.append(bond_token(node, other) + digit_token(digit))
        kids = children[node]
        for child in kids[:-1]:
            out.append("(")
            emit(child, node)
            out.append(")")
        if kids:
            emit(kids[-1], node)

    emit(start, -1)
    return "".join(out)


def _atom_token(graph: MolecularGraph, idx: int) -> str:
    atom = graph.atoms[idx]
    total_h = graph.total_h(idx)
    bare_symbol = atom.element.lower() if atom.aromatic else atom.element
    organic = (atom.element in ORGANIC_SUBSET
               and (not atom.aromatic or atom.element in _AROMATIC_ORGANIC))
    if organic and atom.formal_charge == 0 and atom.isotope is None:
        would_be = implicit_hydrogens(atom.element, graph.bond_order_sum(idx), atom.aromatic)
        if would_be == total_h:
            return bare_symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(bare_symbol)
    if total_h == 1:
        parts.append("H")
    elif total_h > 1:
        parts.append(f"H{total_h}")
    charge = atom.formal_charge
    if charge == 1:
        parts.append("+")
    elif charge == -1:
        parts.append("-")
    elif charge > 1:
        parts.append(f"+{charge}")
    elif charge < -1:
        parts.append(f"-{-charge}")
    parts.append("]")
    return "".join(parts)
