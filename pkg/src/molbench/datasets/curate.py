"""Curation: parse, canonical-dedup, attach SELFIES and depiction paths."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from ..chem import encode_selfies, parse_smiles, write_canonical_smiles
from ..errors import SelfiesError, SmilesParseError
from .ingest import RawRecord
from .spec import TaskSpec


@dataclass(frozen=True)
class MoleculeRecord:
    id: int
    smiles: str           # source text, embedded verbatim in prompts
    selfies: str
    canonical: str
    labels: tuple
    image_path: str
    label_conflict: bool = False


@dataclass
class CurationReport:
    ingested: int = 0
    kept: int = 0
    duplicates_merged: int = 0
    parse_failures: list = field(default_factory=list)   # (row, smiles, error)
    codec_failures: list = field(default_factory=list)   # (row, smiles, error)
    label_conflicts: list = field(default_factory=list)  # (canonical, kept, dropped)

    def to_dict(self) -> dict:
        return {
            "v": 1,
            "ingested": self.ingested,
            "kept": self.kept,
            "duplicates_merged": self.duplicates_merged,
            "parse_failures": [
                {"row": row, "smiles": smiles, "error": error}
                for row, smiles, error in self.parse_failures
            ],
            "codec_failures": [
                {"row": row, "smiles": smiles, "error": error}
                for row, smiles, error in self.codec_failures
            ],
            "label_conflicts": [
                {"canonical": canonical, "kept": list(kept), "dropped": list(dropped)}
                for canonical, kept, dropped in self.label_conflicts
            ],
        }


def image_name(dataset: str, canonical: str) -> str:
    digest = hashlib.sha256(canonical.encode()).hexdigest()[:16]
    return f"{dataset}/{digest}.png"


def curate(
    records: list[RawRecord],
    task: TaskSpec,
    image_dir: Optional[str | Path] = None,
    render_images: bool = False,
) -> tuple[list[MoleculeRecord], CurationReport]:
    """Parse and dedup records; first occurrence of a canonical form wins.

    Label conflicts on merged duplicates keep the first labels, are logged,
    and mark the survivor so the split stage keeps it out of the test set.
    Images are attached as paths; rendering is optional (and slow) so count
    checks can run without touching pixels.
    """
    report = CurationReport(ingested=len(records))
    by_canonical: dict[str, int] = {}
    curated: list[MoleculeRecord] = []

    for raw in records:
        try:
            graph = parse_smiles(raw.smiles)
        except SmilesParseError as exc:
            report.parse_failures.append((raw.row_number, raw.smiles, str(exc)))
            continue
        canonical = write_canonical_smiles(graph)
        if canonical in by_canonical:
            report.duplicates_merged += 1
            position = by_canonical[canonical]
            kept = curated[position]
            if kept.labels != raw.labels:
                report.label_conflicts.append((canonical, kept.labels, raw.labels))
                curated[position] = replace(kept, label_conflict=True)
            continue
        try:
            selfies = encode_selfies(graph)
        except SelfiesError as exc:
            report.codec_failures.append((raw.row_number, raw.smiles, str(exc)))
            continue
        record = MoleculeRecord(
            id=len(curated),
            smiles=raw.smiles,
            selfies=selfies,
            canonical=canonical,
            labels=raw.labels,
            image_path=image_name(task.name, canonical),
        )
        by_canonical[canonical] = len(curated)
        curated.append(record)

    if render_images:
        if image_dir is None:
            raise ValueError("render_images requires image_dir")
        _render_all(curated, Path(image_dir))

    report.kept = len(curated)
    return curated, report


def _render_all(records: list[MoleculeRecord], image_dir: Path) -> None:
    from ..depict import depict_png

    for record in records:
        target = image_dir / record.image_path
        target.parent.mkdir(parents=True, exist_ok=True)
        if target.exists():
            continue
        png = depict_png(parse_smiles(record.canonical))
        target.write_bytes(png)
