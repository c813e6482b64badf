"""Shared test helpers: graph permutation, corpus loading, validity oracles."""

from __future__ import annotations

import pathlib
import random

from molbench.chem import MolecularGraph, parse_smiles
from molbench.chem.elements import allowed_valences, implicit_hydrogens
from molbench.chem.graph import BOND_ORDER_SUM, Bond
from molbench.chem.selfies import _capacity

DATA_DIR = pathlib.Path(__file__).parent / "data"


def load_corpus() -> list[str]:
    lines = (DATA_DIR / "corpus.smi").read_text().splitlines()
    return [line.strip() for line in lines if line.strip()]


def permute_graph(graph: MolecularGraph, mapping: list[int]) -> MolecularGraph:
    """Relabel atoms: atom i moves to index mapping[i]."""
    n = len(graph.atoms)
    atoms = [None] * n
    implicit = [0] * n
    for old, new in enumerate(mapping):
        atoms[new] = graph.atoms[old]
        implicit[new] = graph.implicit_h[old]
    bonds = [Bond(mapping[b.a], mapping[b.b], b.order, b.direction) for b in graph.bonds]
    return MolecularGraph(atoms, bonds, implicit, graph.source_text)


def random_permutation(n: int, rng: random.Random) -> list[int]:
    mapping = list(range(n))
    rng.shuffle(mapping)
    return mapping


def graph_valence_ok(graph: MolecularGraph) -> bool:
    """Independent validity oracle for decoded graphs.

    Bare atoms must admit a non-negative implicit H count; atoms with explicit
    hydrogens must fit bonds + H within the codec capacity table.
    """
    for idx, atom in enumerate(graph.atoms):
        order_sum = sum(
            BOND_ORDER_SUM[graph.bond_between(idx, nbr).order]
            for nbr in graph.neighbors(idx)
        )
        if atom.explicit_h is None:
            if implicit_hydrogens(atom.element, order_sum, atom.aromatic) < 0:
                return False
        else:
            if order_sum + atom.explicit_h > _capacity(atom.element, atom.formal_charge):
                return False
    return True


def parse_corpus() -> list[MolecularGraph]:
    return [parse_smiles(s) for s in load_corpus()]
