"""Positive-pair manifests for the trainer: Aug and T-Aug strategies.

Aug entries name two transforms drawn per molecule from the augmentation
family with the pinned PRNG; T-Aug entries come from Tanimoto mining above
the 0.85 threshold, at most three partners per anchor, directed (both
directions appear when both anchors qualify). Manifests are JSONL and
byte-identical for identical (dataset, strategy, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..chem import parse_smiles
from ..datasets import MoleculeRecord
from ..depict import default_transform_pool
from ..fingerprint import (
    SimilarityIndex,
    T_AUG_POSITIVES,
    T_AUG_THRESHOLD,
    mine_tanimoto_positives,
    morgan_fingerprint,
)
from ..rng import Xoshiro256

AUG = "Aug"
T_AUG = "T-Aug"


@dataclass(frozen=True)
class PairEntry:
    anchor_id: int
    anchor_image: str
    positive_id: Optional[int]       # None for Aug (same molecule, two views)
    positive_image: Optional[str]
    similarity: Optional[float]      # T-Aug only
    transforms: tuple[str, ...]      # Aug only, exactly two specs


@dataclass(frozen=True)
class PairManifest:
    strategy: str
    seed: int
    entries: tuple[PairEntry, ...]
    skipped: tuple[int, ...] = field(default=())

    def to_jsonl(self) -> str:
        lines = []
        for entry in self.entries:
            lines.append(json.dumps({
                "v": 1,
                "strategy": self.strategy,
                "seed": self.seed,
                "anchor_id": entry.anchor_id,
                "anchor_image": entry.anchor_image,
                "positive_id": entry.positive_id,
                "positive_image": entry.positive_image,
                "similarity": entry.similarity,
                "transforms": list(entry.transforms),
            }, sort_keys=True))
        for anchor_id in self.skipped:
            lines.append(json.dumps(
                {"v": 1, "strategy": self.strategy, "seed": self.seed,
                 "skipped_anchor": anchor_id}, sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PairManifest":
        entries = []
        skipped = []
        strategy = None
        seed = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                strategy = data["strategy"]
                seed = data["seed"]
                if "skipped_anchor" in data:
                    skipped.append(data["skipped_anchor"])
                    continue
                entries.append(PairEntry(
                    anchor_id=data["anchor_id"],
                    anchor_image=data["anchor_image"],
                    positive_id=data["positive_id"],
                    positive_image=data["positive_image"],
                    similarity=data["similarity"],
                    transforms=tuple(data["transforms"]),
                ))
        if strategy is None:
            raise ValueError(f"{path}: empty pair manifest")
        return cls(strategy, seed, tuple(entries), tuple(skipped))


def build_pair_manifest(
    records: list[MoleculeRecord],
    strategy: str,
    seed: int,
    threshold: float = T_AUG_THRESHOLD,
    positives_per_anchor: int = T_AUG_POSITIVES,
) -> PairManifest:
    if strategy == AUG:
        return _build_aug(records, seed)
    if strategy == T_AUG:
        return _build_taug(records, seed, threshold, positives_per_anchor)
    raise ValueError(f"unknown pair strategy {strategy!r}")


def _build_aug(records: list[MoleculeRecord], seed: int) -> PairManifest:
    pool = default_transform_pool()
    rng = Xoshiro256(seed)
    entries = []
    for record in sorted(records, key=lambda r: r.id):
        first, second = rng.sample_two_distinct(pool)
        entries.append(PairEntry(
            anchor_id=record.id,
            anchor_image=record.image_path,
            positive_id=None,
            positive_image=None,
            similarity=None,
            transforms=(first.spec(), second.spec()),
        ))
    return PairManifest(AUG, seed, tuple(entries))


def _build_taug(records, seed, threshold, positives_per_anchor) -> PairManifest:
    by_id = {record.id: record for record in records}
    index = SimilarityIndex(2048, 2)
    for record in sorted(records, key=lambda r: r.id):
        index.add(record.id,
                  morgan_fingerprint(parse_smiles(record.canonical),
                                     source_id=record.id))
    pairs, skipped = mine_tanimoto_positives(index, threshold, positives_per_anchor)
    entries = tuple(
        PairEntry(
            anchor_id=pair.anchor_id,
            anchor_image=by_id[pair.anchor_id].image_path,
            positive_id=pair.positive_id,
            positive_image=by_id[pair.positive_id].image_path,
            similarity=pair.similarity,
            transforms=(),
        )
        for pair in pairs
    )
    return PairManifest(T_AUG, seed, entries, tuple(skipped))
