"""Task specifications for the ten benchmark datasets.

Each TaskSpec names the label columns of the source CSV, the task kind, and
the phrasing of the positive class for classification prompts. Custom specs
load from TOML files with the same fields.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CLASSIFICATION = "classification"
REGRESSION = "regression"
DESCRIPTION = "description"
MULTI_REGRESSION = "multi_regression"

# Pinned order of the twelve quantum targets.
QM9_TARGETS = ("alpha", "gap", "homo", "lumo", "mu", "cv",
               "g298", "h298", "r2", "u298", "u0", "zpve")


@dataclass(frozen=True)
class TaskSpec:
    name: str
    kind: str
    label_columns: tuple[str, ...]
    smiles_column: str = "smiles"
    units: Optional[str] = None
    positive_label_meaning: str = ""
    property_description: str = ""

    def __post_init__(self):
        if self.kind not in (CLASSIFICATION, REGRESSION, DESCRIPTION, MULTI_REGRESSION):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.kind == CLASSIFICATION and len(self.label_columns) != 1:
            raise ValueError("classification tasks take exactly one label column")
        if self.kind == MULTI_REGRESSION and len(self.label_columns) != 12:
            raise ValueError("multi_regression lists all 12 targets")

    @property
    def expected_format(self) -> str:
        return {
            CLASSIFICATION: "yes_no",
            REGRESSION: "number",
            MULTI_REGRESSION: "number_vector",
            DESCRIPTION: "free_text",
        }[self.kind]


BUILTIN_TASKS: dict[str, TaskSpec] = {
    "bace": TaskSpec(
        "bace", CLASSIFICATION, ("Class",), smiles_column="mol",
        positive_label_meaning="inhibits human beta-secretase 1 (BACE-1)",
        property_description="BACE-1 inhibition",
    ),
    "bbbp": TaskSpec(
        "bbbp", CLASSIFICATION, ("p_np",),
        positive_label_meaning="penetrates the blood-brain barrier",
        property_description="blood-brain barrier penetration",
    ),
    "hiv": TaskSpec(
        "hiv", CLASSIFICATION, ("HIV_active",),
        positive_label_meaning="inhibits HIV replication",
        property_description="HIV replication inhibition",
    ),
    # ClinTox reduced to the FDA-approval label.
    "clintox": TaskSpec(
        "clintox", CLASSIFICATION, ("FDA_APPROVED",),
        positive_label_meaning="is approved by the FDA for clinical trials",
        property_description="FDA approval status",
    ),
    # Tox21 reduced to the NR-AR assay label.
    "tox21": TaskSpec(
        "tox21", CLASSIFICATION, ("NR-AR",),
        positive_label_meaning="shows androgen-receptor-mediated toxicity (NR-AR)",
        property_description="NR-AR toxicity",
    ),
    "esol": TaskSpec(
        "esol", REGRESSION, ("measured log solubility in mols per litre",),
        units="log mol/L",
        property_description="aqueous solubility",
    ),
    "ld50": TaskSpec(
        "ld50", REGRESSION, ("LD50",), units="-log(mol/kg)",
        property_description="acute oral toxicity (LD50)",
    ),
    "qm9": TaskSpec(
        "qm9", MULTI_REGRESSION, QM9_TARGETS, units="mixed quantum units",
        property_description="twelve quantum mechanical properties",
    ),
    "pcqm4mv2": TaskSpec(
        "pcqm4mv2", REGRESSION, ("homolumogap",), units="eV",
        property_description="HOMO-LUMO energy gap",
    ),
    "chebi": TaskSpec(
        "chebi", DESCRIPTION, ("description",),
        property_description="molecular description",
    ),
}


def load_task_spec(source: str | Path) -> TaskSpec:
    """Builtin name or a TOML file with the TaskSpec fields."""
    name = str(source)
    if name in BUILTIN_TASKS:
        return BUILTIN_TASKS[name]
    path = Path(source)
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return TaskSpec(
        name=data["name"],
        kind=data["kind"],
        label_columns=tuple(data["label_columns"]),
        smiles_column=data.get("smiles_column", "smiles"),
        units=data.get("units"),
        positive_label_meaning=data.get("positive_label_meaning", ""),
        property_description=data.get("property_description", data["name"]),
    )
