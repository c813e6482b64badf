"""Molecular graphs: SMILES parsing, canonicalization, SELFIES codec."""

from .canon import canonical_ranks, write_canonical_smiles
from .graph import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_SINGLE,
    BOND_TRIPLE,
    Atom,
    Bond,
    MolecularGraph,
)
from .selfies import decode_selfies, encode_selfies
from .smiles import parse_smiles

__all__ = [
    "Atom",
    "Bond",
    "MolecularGraph",
    "BOND_SINGLE",
    "BOND_DOUBLE",
    "BOND_TRIPLE",
    "BOND_AROMATIC",
    "parse_smiles",
    "write_canonical_smiles",
    "canonical_ranks",
    "encode_selfies",
    "decode_selfies",
]
