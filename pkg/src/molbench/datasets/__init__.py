"""Dataset ingestion, curation, and deterministic splits."""

from .curate import CurationReport, MoleculeRecord, curate, image_name
from .ingest import IngestReport, RawRecord, ingest_csv
from .io import (
    read_manifest,
    read_split_manifest,
    write_manifest,
    write_report,
    write_split_manifest,
)
from .spec import (
    BUILTIN_TASKS,
    CLASSIFICATION,
    DESCRIPTION,
    MULTI_REGRESSION,
    QM9_TARGETS,
    REGRESSION,
    TaskSpec,
    load_task_spec,
)
from .split import DEFAULT_RATIO, DEFAULT_SEED, SplitConfig, split, train_size

__all__ = [
    "TaskSpec",
    "load_task_spec",
    "BUILTIN_TASKS",
    "QM9_TARGETS",
    "CLASSIFICATION",
    "REGRESSION",
    "DESCRIPTION",
    "MULTI_REGRESSION",
    "RawRecord",
    "IngestReport",
    "ingest_csv",
    "MoleculeRecord",
    "CurationReport",
    "curate",
    "image_name",
    "SplitConfig",
    "split",
    "train_size",
    "DEFAULT_RATIO",
    "DEFAULT_SEED",
    "write_manifest",
    "read_manifest",
    "write_split_manifest",
    "read_split_manifest",
    "write_report",
]
