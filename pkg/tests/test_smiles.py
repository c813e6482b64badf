import pytest

from molbench.chem import parse_smiles
from molbench.chem.graph import BOND_AROMATIC, BOND_DOUBLE, BOND_SINGLE, BOND_TRIPLE
from molbench.errors import (
    UnbalancedBranch,
    UnclosedRing,
    UnknownElement,
    ValenceViolation,
)

from .util import load_corpus


def test_ethanol_shape():
    g = parse_smiles("CCO")
    assert [a.element for a in g.atoms] == ["C", "C", "O"]
    assert len(g.bonds) == 2
    assert all(b.order == BOND_SINGLE for b in g.bonds)
    assert g.implicit_h == (3, 2, 1)


def test_benzene_aromatic():
    g = parse_smiles("c1ccccc1")
    assert len(g.atoms) == 6
    assert all(a.aromatic for a in g.atoms)
    assert all(b.order == BOND_AROMATIC for b in g.bonds)
    assert len(g.bonds) == 6
    assert all(h == 1 for h in g.implicit_h)
    assert all(a.ring_member for a in g.atoms)


def test_unbalanced_branch_offset():
    with pytest.raises(UnbalancedBranch) as err:
        parse_smiles("C(C")
    assert err.value.offset == 1


def test_unmatched_close_paren():
    with pytest.raises(UnbalancedBranch) as err:
        parse_smiles("CC)C")
    assert err.value.offset == 2


def test_unclosed_ring():
    with pytest.raises(UnclosedRing) as err:
        parse_smiles("C1CCC")
    assert err.value.offset == 1


def test_unknown_element():
    with pytest.raises(UnknownElement):
        parse_smiles("C[Xx]C")
    with pytest.raises(UnknownElement):
        parse_smiles("CqC")


def test_valence_violation():
    with pytest.raises(ValenceViolation):
        parse_smiles("C(C)(C)(C)(C)C")  # five bonds on bare carbon
    with pytest.raises(ValenceViolation):
        parse_smiles("O=C=O=C")  # three double bonds through oxygen


def test_error_offsets_within_input():
    bad = ["C(C", "C1CC", "C[Xx]", "C(C)(C)(C)(C)C", "CC)", "C=", "C=.C", "C%1C"]
    for text in bad:
        with pytest.raises((UnbalancedBranch, UnclosedRing, UnknownElement,
                            ValenceViolation)) as err:
            parse_smiles(text)
        assert 0 <= err.value.offset < len(text)


def test_two_digit_ring_closure():
    g = parse_smiles("C%10CCCC%10")
    assert len(g.bonds) == 5
    assert sorted(len(g.neighbors(i)) for i in range(5)) == [2, 2, 2, 2, 2]


def test_ring_bond_order_mismatch():
    with pytest.raises(UnclosedRing):
        parse_smiles("C=1CCCC#1")


def test_duplicate_ring_bond():
    with pytest.raises(UnclosedRing):
        parse_smiles("C12CC12")


def test_bracket_atom_fields():
    g = parse_smiles("[13C@@H2+]")
    atom = g.atoms[0]
    assert atom.isotope == 13
    assert atom.explicit_h == 2
    assert atom.formal_charge == 1
    assert atom.chirality == "@@"


def test_charge_forms():
    assert parse_smiles("[O-]").atoms[0].formal_charge == -1
    assert parse_smiles("[Fe+2]").atoms[0].formal_charge == 2
    assert parse_smiles("[Fe++]").atoms[0].formal_charge == 2
    assert parse_smiles("[N+3]").atoms[0].formal_charge == 3


def test_dot_fragments():
    g = parse_smiles("[Na+].[Cl-]")
    assert len(g.atoms) == 2
    assert len(g.bonds) == 0
    assert len(g.fragments()) == 2


def test_explicit_bond_orders():
    g = parse_smiles("C#CC=C")
    orders = sorted(b.order for b in g.bonds)
    assert orders == [BOND_SINGLE, BOND_DOUBLE, BOND_TRIPLE]


def test_single_bond_between_aromatic_rings():
    g = parse_smiles("c1ccc(cc1)-c1ccccc1")
    singles = [b for b in g.bonds if b.order == BOND_SINGLE]
    assert len(singles) == 1


def test_aromatic_bond_between_plain_atoms_rejected():
    with pytest.raises(ValenceViolation):
        parse_smiles("C:C")


def test_directional_bonds_kept_as_annotation():
    g = parse_smiles("C/C=C/C")
    directions = [b.direction for b in g.bonds]
    assert directions.count("/") == 2
    assert all(b.order in (BOND_SINGLE, BOND_DOUBLE) for b in g.bonds)


def test_heteroaromatic_hydrogens():
    # pyridine N: no H; pyrrole written [nH]: one explicit H; furan O, thiophene S: none
    assert parse_smiles("c1ccncc1").total_h(3) == 0
    pyrrole = parse_smiles("c1cc[nH]c1")
    n_idx = next(i for i, a in enumerate(pyrrole.atoms) if a.element == "N")
    assert pyrrole.total_h(n_idx) == 1
    furan = parse_smiles("c1ccoc1")
    o_idx = next(i for i, a in enumerate(furan.atoms) if a.element == "O")
    assert furan.total_h(o_idx) == 0
    thio = parse_smiles("c1ccsc1")
    s_idx = next(i for i, a in enumerate(thio.atoms) if a.element == "S")
    assert thio.total_h(s_idx) == 0


def test_fused_aromatic_junction_has_no_h():
    g = parse_smiles("c1ccc2ccccc2c1")
    junctions = [i for i in range(len(g.atoms)) if g.degree(i) == 3]
    assert len(junctions) == 2
    assert all(g.total_h(i) == 0 for i in junctions)


def test_corpus_parses():
    for smiles in load_corpus():
        g = parse_smiles(smiles)
        assert len(g.atoms) >= 1
