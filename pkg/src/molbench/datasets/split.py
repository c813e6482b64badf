"""Deterministic train/test splitting.

Records are ordered by id, shuffled by the pinned xoshiro256** stream, and
the first round(ratio * n) go to train. Rounding (not floor) reproduces the
published per-dataset counts exactly. Records whose duplicate merge logged a
label conflict are swapped out of the test set so gold labels stay
unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import TooFewRecords
from ..rng import Xoshiro256
from .curate import MoleculeRecord

DEFAULT_RATIO = 0.8
DEFAULT_SEED = 42


@dataclass(frozen=True)
class SplitConfig:
    ratio: float = DEFAULT_RATIO
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not (0.0 < self.ratio < 1.0):
            raise ValueError("ratio must be in (0, 1)")


def train_size(n: int, ratio: float) -> int:
    """round(ratio * n), implemented as floor(ratio * n + 0.5)."""
    return int(ratio * n + 0.5)


def split(
    records: list[MoleculeRecord], cfg: SplitConfig = SplitConfig()
) -> tuple[list[MoleculeRecord], list[MoleculeRecord]]:
    if len(records) < 2:
        raise TooFewRecords(f"need at least 2 records, have {len(records)}")
    ordered = sorted(records, key=lambda r: r.id)
    rng = Xoshiro256(cfg.seed)
    rng.shuffle(ordered)
    cut = train_size(len(ordered), cfg.ratio)
    train, test = ordered[:cut], ordered[cut:]

    # conflicted records may not serve as test gold: swap into train
    swap_slot = len(train) - 1
    for position, record in enumerate(test):
        if not record.label_conflict:
            continue
        while swap_slot >= 0 and train[swap_slot].label_conflict:
            swap_slot -= 1
        if swap_slot < 0:
            break
        train[swap_slot], test[position] = test[position], train[swap_slot]
        swap_slot -= 1
    return train, test
