import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molbench.chem import parse_smiles, write_canonical_smiles
from molbench.fingerprint import (
    Fingerprint,
    SimilarityIndex,
    load_index,
    mine_tanimoto_positives,
    morgan_fingerprint,
    save_index,
    tanimoto,
    top_k_similar,
)
from molbench.errors import WidthMismatch

from .util import load_corpus, permute_graph, random_permutation


def fp_from_bits(bits, width=2048, source_id=-1):
    words = [0] * (width // 64)
    for bit in bits:
        words[bit >> 6] |= 1 << (bit & 63)
    return Fingerprint(np.array(words, dtype=np.uint64), width, 2, source_id)


def brute_tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """Independent oracle over Python int bitsets."""
    ia = sum(1 << bit for bit in a.bits())
    ib = sum(1 << bit for bit in b.bits())
    union = (ia | ib).bit_count()
    return (ia & ib).bit_count() / union if union else 0.0


def test_determinism():
    g = parse_smiles("CC(=O)Oc1ccccc1C(=O)O")
    assert morgan_fingerprint(g) == morgan_fingerprint(g)


def test_single_carbon_radius2_bits():
    fp = morgan_fingerprint(parse_smiles("C"), radius=2)
    assert fp.popcount <= 3
    assert fp.popcount >= 1


def test_permutation_invariance():
    rng = random.Random(5)
    g = parse_smiles("CCO")
    base = morgan_fingerprint(g)
    for _ in range(20):
        shuffled = permute_graph(g, random_permutation(len(g.atoms), rng))
        assert morgan_fingerprint(shuffled) == base


def test_tanimoto_identity_and_disjoint():
    x = fp_from_bits([1, 5, 9])
    assert tanimoto(x, x) == 1.0
    y = fp_from_bits([2, 6, 10])
    assert tanimoto(x, y) == 0.0


def test_tanimoto_direct_arithmetic():
    a = fp_from_bits(range(0, 9))       # 9 bits
    b = fp_from_bits(range(6, 12))      # 6 bits, 3 shared -> union 12
    assert tanimoto(a, b) == pytest.approx(3 / 12)


def test_tanimoto_both_empty_is_zero():
    empty = fp_from_bits([])
    assert tanimoto(empty, empty) == 0.0


def test_width_mismatch():
    with pytest.raises(WidthMismatch):
        tanimoto(fp_from_bits([1], width=2048), fp_from_bits([1], width=1024))


def test_tanimoto_symmetry_on_corpus():
    fps = [morgan_fingerprint(parse_smiles(s)) for s in load_corpus()[:20]]
    for i, a in enumerate(fps):
        for b in fps[i:]:
            assert tanimoto(a, b) == tanimoto(b, a)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2047), max_size=300),
       st.lists(st.integers(0, 2047), max_size=300))
def test_tanimoto_bounds_and_oracle(bits_a, bits_b):
    a, b = fp_from_bits(bits_a), fp_from_bits(bits_b)
    score = tanimoto(a, b)
    assert 0.0 <= score <= 1.0
    assert score == pytest.approx(brute_tanimoto(a, b), abs=1e-12)


def _random_index(n, rng, width=2048):
    index = SimilarityIndex(width, 2)
    fps = {}
    for mol_id in range(n):
        bits = rng.sample(range(width), rng.randint(5, 80))
        fp = fp_from_bits(bits, width, source_id=mol_id)
        index.add(mol_id, fp)
        fps[mol_id] = fp
    return index, fps


def test_top_k_zero():
    index, fps = _random_index(10, random.Random(0))
    assert top_k_similar(fps[0], index, 0) == []


def test_top_k_excludes_self():
    index, fps = _random_index(10, random.Random(1))
    results = top_k_similar(fps[3], index, 5)
    assert all(mol_id != 3 for mol_id, _ in results)


def test_top_k_matches_bruteforce_scan():
    rng = random.Random(42)
    index, fps = _random_index(200, rng)
    for k in (1, 2, 4, 10):
        for query_id in (0, 17, 99):
            query = fps[query_id]
            expected = sorted(
                ((mol_id, brute_tanimoto(query, fp)) for mol_id, fp in fps.items()
                 if mol_id != query_id),
                key=lambda pair: (-pair[1], pair[0]),
            )[:k]
            got = top_k_similar(query, index, k)
            assert [mol_id for mol_id, _ in got] == [mol_id for mol_id, _ in expected]
            for (_, s_got), (_, s_exp) in zip(got, expected):
                assert s_got == pytest.approx(s_exp, abs=1e-12)


def test_mining_empty_on_dissimilar_set():
    index = SimilarityIndex(2048, 2)
    for mol_id in range(5):
        index.add(mol_id, fp_from_bits([mol_id * 3, mol_id * 3 + 1], source_id=mol_id))
    pairs, skipped = mine_tanimoto_positives(index, 0.85, 3)
    assert pairs == []
    assert skipped == list(range(5))


def test_mining_duplicate_pair_both_directions():
    index = SimilarityIndex(2048, 2)
    shared = [4, 8, 15, 16, 23]
    index.add(0, fp_from_bits(shared, source_id=0))
    index.add(1, fp_from_bits(shared, source_id=1))
    pairs, skipped = mine_tanimoto_positives(index, 0.85, 3)
    assert {(p.anchor_id, p.positive_id) for p in pairs} == {(0, 1), (1, 0)}
    assert all(p.similarity == 1.0 for p in pairs)
    assert skipped == []


def brute_mine(fps, threshold, m):
    """O(n^2) oracle for positive-pair mining."""
    pairs = []
    skipped = []
    for anchor_id, anchor in sorted(fps.items()):
        scored = sorted(
            ((other_id, brute_tanimoto(anchor, other)) for other_id, other in fps.items()
             if other_id != anchor_id),
            key=lambda pair: (-pair[1], pair[0]),
        )
        qualifying = [(i, s) for i, s in scored if s > threshold][:m]
        if not qualifying:
            skipped.append(anchor_id)
        pairs.extend((anchor_id, i, s) for i, s in qualifying)
    return pairs, skipped


def test_mining_matches_bruteforce_pairs():
    rng = random.Random(9)
    # clusters of near-identical molecules so the threshold actually fires
    index = SimilarityIndex(2048, 2)
    fps = {}
    mol_id = 0
    for cluster in range(10):
        core = rng.sample(range(2048), 60)
        for member in range(rng.randint(1, 4)):
            bits = set(core)
            for _ in range(rng.randint(0, 2)):
                bits.add(rng.randrange(2048))
            fp = fp_from_bits(sorted(bits), source_id=mol_id)
            index.add(mol_id, fp)
            fps[mol_id] = fp
            mol_id += 1
    got_pairs, got_skipped = mine_tanimoto_positives(index, 0.85, 3)
    exp_pairs, exp_skipped = brute_mine(fps, 0.85, 3)
    assert [(p.anchor_id, p.positive_id) for p in got_pairs] == \
        [(a, b) for a, b, _ in exp_pairs]
    assert got_skipped == exp_skipped
    for pair, (_, _, score) in zip(got_pairs, exp_pairs):
        assert pair.similarity == pytest.approx(score, abs=1e-12)
        assert pair.similarity > 0.85


def test_mining_monotone_in_threshold():
    rng = random.Random(13)
    index, _ = _random_index(60, rng, width=256)
    previous = None
    for threshold in (0.5, 0.7, 0.85, 0.95):
        pairs, _ = mine_tanimoto_positives(index, threshold, m=10**9)
        keyed = {(p.anchor_id, p.positive_id) for p in pairs}
        if previous is not None:
            assert keyed <= previous
        previous = keyed


def test_index_dedup_by_canonical():
    index = SimilarityIndex(2048, 2)
    fp = morgan_fingerprint(parse_smiles("CCO"), source_id=0)
    canonical = write_canonical_smiles(parse_smiles("CCO"))
    assert index.add(0, fp, canonical)
    fp2 = morgan_fingerprint(parse_smiles("OCC"), source_id=1)
    assert not index.add(1, fp2, write_canonical_smiles(parse_smiles("OCC")))
    assert len(index) == 1


def test_index_round_trip_file(tmp_path):
    rng = random.Random(3)
    index, fps = _random_index(25, rng)
    path = tmp_path / "index.bin"
    save_index(index, path)
    loaded = load_index(path)
    assert loaded.ids == index.ids
    assert loaded.width == index.width and loaded.radius == index.radius
    assert np.array_equal(loaded.matrix(), index.matrix())


def test_throughput_1m_comparisons():
    """Performance gate: 1M 2048-bit Tanimoto comparisons within 20s.

    (Machine-relative budget; the C kernel does this in well under a second,
    the numpy fallback in a few seconds.)
    """
    import time

    from molbench.fingerprint.kernels import bulk_tanimoto

    rng = np.random.default_rng(12345)
    matrix = rng.integers(0, 2**63, size=(10_000, 32), dtype=np.int64).astype(np.uint64)
    queries = rng.integers(0, 2**63, size=(100, 32), dtype=np.int64).astype(np.uint64)
    start = time.monotonic()
    total = 0.0
    for query in queries:
        total += float(bulk_tanimoto(query, matrix).sum())
    elapsed = time.monotonic() - start
    assert total > 0
    assert elapsed < 20.0, f"1M comparisons took {elapsed:.2f}s"


def test_kernel_agreement(monkeypatch):
    """Compiled and numpy kernels agree bit-for-bit on scores."""
    import importlib

    from molbench.fingerprint import kernels

    rng = random.Random(77)
    index, fps = _random_index(50, rng)
    query = fps[7]
    native = index.scores_for(query)
    monkeypatch.setenv("MOLBENCH_NO_EXT", "1")
    importlib.reload(kernels)
    try:
        fallback = kernels.bulk_tanimoto(query.words, index.matrix())
        assert np.array_equal(native, fallback)
    finally:
        monkeypatch.delenv("MOLBENCH_NO_EXT")
        importlib.reload(kernels)
