"""CSV/TSV ingestion: raw rows to (smiles, labels) records."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from ..errors import EmptyFile, MissingColumn
from .spec import CLASSIFICATION, DESCRIPTION, TaskSpec

LabelValue = Union[float, int, str]


@dataclass(frozen=True)
class RawRecord:
    row_number: int  # 1-based data row number in the source file
    smiles: str
    labels: tuple[LabelValue, ...]


@dataclass(frozen=True)
class IngestReport:
    total_rows: int
    kept: int
    dropped_missing_label: int
    dropped_empty_smiles: int
    dropped_bad_label: int


def _parse_label(value: str, task: TaskSpec) -> LabelValue:
    value = value.strip()
    if task.kind == DESCRIPTION:
        return value
    number = float(value)
    if task.kind == CLASSIFICATION:
        if number not in (0.0, 1.0):
            raise ValueError(f"binary label out of range: {value}")
        return int(number)
    return number


def ingest_csv(path: str | Path, task: TaskSpec) -> tuple[list[RawRecord], IngestReport]:
    """Read rows, dropping (and counting) unusable ones.

    Raises MissingColumn when the header lacks the smiles or a label column,
    EmptyFile when no data rows exist at all.
    """
    path = Path(path)
    delimiter = "\t" if path.suffix.lower() in (".tsv", ".tab") else ","
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFile(f"{path}: no header row") from None
        columns = {name.strip(): pos for pos, name in enumerate(header)}
        if task.smiles_column not in columns:
            raise MissingColumn(f"{path}: missing column {task.smiles_column!r}")
        for label in task.label_columns:
            if label not in columns:
                raise MissingColumn(f"{path}: missing column {label!r}")
        smiles_pos = columns[task.smiles_column]
        label_pos = [columns[label] for label in task.label_columns]

        records: list[RawRecord] = []
        total = dropped_missing = dropped_empty = dropped_bad = 0
        for row_number, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            total += 1
            smiles = row[smiles_pos].strip() if smiles_pos < len(row) else ""
            if not smiles:
                dropped_empty += 1
                continue
            raw_labels = [
                row[pos].strip() if pos < len(row) else "" for pos in label_pos
            ]
            if any(cell == "" for cell in raw_labels):
                dropped_missing += 1
                continue
            try:
                labels = tuple(_parse_label(cell, task) for cell in raw_labels)
            except ValueError:
                dropped_bad += 1
                continue
            records.append(RawRecord(row_number, smiles, labels))

    if total == 0:
        raise EmptyFile(f"{path}: header only, no data rows")
    report = IngestReport(total, len(records), dropped_missing, dropped_empty, dropped_bad)
    return records, report
