import itertools
import random

from molbench.chem import canonical_ranks, parse_smiles, write_canonical_smiles

from .util import load_corpus, permute_graph, random_permutation


def test_isomorphic_inputs_share_canonical_form():
    assert (write_canonical_smiles(parse_smiles("OCC"))
            == write_canonical_smiles(parse_smiles("CCO")))


def test_round_trip_is_isomorphic():
    for smiles in load_corpus():
        g = parse_smiles(smiles)
        canonical = write_canonical_smiles(g)
        assert write_canonical_smiles(parse_smiles(canonical)) == canonical


def test_permutation_oracle_100():
    """100 random atom-order permutations of one molecule all canonicalize identically."""
    g = parse_smiles("CC(C)Cc1ccc(cc1)C(C)C(=O)O")
    expected = write_canonical_smiles(g)
    rng = random.Random(7)
    for _ in range(100):
        shuffled = permute_graph(g, random_permutation(len(g.atoms), rng))
        assert write_canonical_smiles(shuffled) == expected


def test_permutation_invariance_across_corpus():
    rng = random.Random(11)
    for smiles in load_corpus():
        g = parse_smiles(smiles)
        expected = write_canonical_smiles(g)
        for _ in range(50):
            shuffled = permute_graph(g, random_permutation(len(g.atoms), rng))
            assert write_canonical_smiles(shuffled) == expected, smiles


def test_single_atom_rank():
    assert canonical_ranks(parse_smiles("C")) == [0]


def test_benzene_one_rank_class():
    ranks = canonical_ranks(parse_smiles("c1ccccc1"))
    assert len(set(ranks)) == 1


def test_toluene_classes_match_automorphism_oracle():
    """Exhaustive automorphism check on all 7! relabelings of toluene."""
    g = parse_smiles("Cc1ccccc1")
    n = len(g.atoms)
    adjacency = {
        (b.a, b.b): b.order for b in g.bonds
    } | {(b.b, b.a): b.order for b in g.bonds}
    elements = [a.element for a in g.atoms]

    def is_automorphism(perm):
        for i in range(n):
            if elements[perm[i]] != elements[i]:
                return False
        for (a, b), order in adjacency.items():
            if adjacency.get((perm[a], perm[b])) != order:
                return False
        return True

    orbit = {i: {i} for i in range(n)}
    for perm in itertools.permutations(range(n)):
        if is_automorphism(perm):
            for i in range(n):
                orbit[i].add(perm[i])

    ranks = canonical_ranks(g)
    for i in range(n):
        for j in range(n):
            same_orbit = j in orbit[i]
            same_rank = ranks[i] == ranks[j]
            assert same_orbit == same_rank, (i, j)
    methyl = next(i for i in range(n) if g.degree(i) == 1 and elements[i] == "C")
    assert sum(1 for r in ranks if r == ranks[methyl]) == 1


def test_ranks_permutation_invariant():
    g = parse_smiles("NCCc1ccc(O)c(O)c1")
    base = canonical_ranks(g)
    rng = random.Random(3)
    for _ in range(25):
        mapping = random_permutation(len(g.atoms), rng)
        shuffled = permute_graph(g, mapping)
        permuted_ranks = canonical_ranks(shuffled)
        for old, new in enumerate(mapping):
            assert permuted_ranks[new] == base[old]


def test_hydrogen_provenance_normalized():
    # explicit-H bracket form equals bare form when counts agree
    assert (write_canonical_smiles(parse_smiles("[CH4]"))
            == write_canonical_smiles(parse_smiles("C")))
    # but a genuinely different H count stays distinct
    assert (write_canonical_smiles(parse_smiles("[CH3]"))
            != write_canonical_smiles(parse_smiles("C")))
