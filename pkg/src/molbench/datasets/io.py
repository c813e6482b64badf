"""Versioned on-disk forms: dataset manifest JSONL, split manifest JSON."""

from __future__ import annotations

import json
from pathlib import Path

from .curate import CurationReport, MoleculeRecord
from .split import SplitConfig

MANIFEST_VERSION = 1


def write_manifest(records: list[MoleculeRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps({
                "v": MANIFEST_VERSION,
                "id": record.id,
                "smiles": record.smiles,
                "selfies": record.selfies,
                "canonical": record.canonical,
                "labels": list(record.labels),
                "image_path": record.image_path,
                "label_conflict": record.label_conflict,
            }, sort_keys=True) + "\n")


def read_manifest(path: str | Path) -> list[MoleculeRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            records.append(MoleculeRecord(
                id=data["id"],
                smiles=data["smiles"],
                selfies=data["selfies"],
                canonical=data["canonical"],
                labels=tuple(data["labels"]),
                image_path=data["image_path"],
                label_conflict=data.get("label_conflict", False),
            ))
    return records


def write_split_manifest(train_ids, test_ids, cfg: SplitConfig, path) -> None:
    payload = {
        "v": MANIFEST_VERSION,
        "ratio": cfg.ratio,
        "seed": cfg.seed,
        "train_ids": list(train_ids),
        "test_ids": list(test_ids),
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=0) + "\n")


def read_split_manifest(path) -> dict:
    return json.loads(Path(path).read_text())


def write_report(report: CurationReport, path) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
