"""Benchmark: compiled popcount kernel vs the numpy fallback.

Run from the repo root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_tanimoto.py

Times 1M single-pair comparisons (bulk, 100 queries x 10k rows) and a
500-molecule mining pass in both kernel modes.
"""

from __future__ import annotations

import importlib
import os
import time

import numpy as np


def _time_bulk(kernels, matrix, queries) -> float:
    start = time.perf_counter()
    sink = 0.0
    for query in queries:
        sink += float(kernels.bulk_tanimoto(query, matrix).sum())
    elapsed = time.perf_counter() - start
    assert sink >= 0.0
    return elapsed


def _time_mining(n: int = 500) -> float:
    from molbench.fingerprint import SimilarityIndex, mine_tanimoto_positives
    from molbench.fingerprint.morgan import Fingerprint

    rng = np.random.default_rng(7)
    index = SimilarityIndex(2048, 2)
    for mol_id in range(n):
        words = rng.integers(0, 2**63, size=32, dtype=np.int64).astype(np.uint64)
        index.add(mol_id, Fingerprint(words, 2048, 2, mol_id))
    start = time.perf_counter()
    mine_tanimoto_positives(index, 0.85, 3)
    return time.perf_counter() - start


def run(mode_name: str) -> tuple[float, float]:
    import molbench.fingerprint.kernels as kernels

    importlib.reload(kernels)
    print(f"--- kernel: {kernels.kernel_name()} ({mode_name})")
    rng = np.random.default_rng(12345)
    matrix = rng.integers(0, 2**63, size=(10_000, 32), dtype=np.int64).astype(np.uint64)
    queries = rng.integers(0, 2**63, size=(100, 32), dtype=np.int64).astype(np.uint64)
    bulk = _time_bulk(kernels, matrix, queries)
    rate = 1_000_000 / bulk / 1e6
    print(f"  1M pair comparisons: {bulk * 1000:8.1f} ms  ({rate:6.1f} M cmp/s)")
    mining = _time_mining()
    print(f"  500-molecule mining: {mining * 1000:8.1f} ms")
    return bulk, mining


def main() -> None:
    os.environ.pop("MOLBENCH_NO_EXT", None)
    native_bulk, native_mine = run("native selection")
    os.environ["MOLBENCH_NO_EXT"] = "1"
    fallback_bulk, fallback_mine = run("forced numpy fallback")
    os.environ.pop("MOLBENCH_NO_EXT", None)
    print("--- summary")
    print(f"  bulk speedup:   {fallback_bulk / native_bulk:5.2f}x")
    print(f"  mining speedup: {fallback_mine / native_mine:5.2f}x")


if __name__ == "__main__":
    main()
