"""Prompt assembly: outline, task instruction, examples, question.

Zero-shot prompts omit the task instruction and examples entirely; ICL(0)
keeps the instruction but drops the example block; CoT appends a reasoning
instruction plus a worked rationale before the question. Only the target
molecule gets an image (endpoints accept a single image per request).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from ..datasets import (
    CLASSIFICATION,
    DESCRIPTION,
    MULTI_REGRESSION,
    REGRESSION,
    MoleculeRecord,
    TaskSpec,
)
from ..errors import InsufficientExamples, UnknownPlaceholder
from ..fingerprint import SimilarityIndex, morgan_fingerprint, top_k_similar
from .templates import load_template

ZERO_SHOT = "zero_shot"
ICL = "icl"
COT = "cot"

SMILES_REPR = "SMILES"
SELFIES_REPR = "SELFIES"


@dataclass(frozen=True)
class PromptMode:
    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in (ZERO_SHOT, ICL, COT):
            raise ValueError(f"unknown prompt mode {self.kind!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.kind == ZERO_SHOT and self.k != 0:
            raise ValueError("zero-shot carries no examples")

    @property
    def tag(self) -> str:
        return self.kind if self.kind == ZERO_SHOT else f"{self.kind}{self.k}"


@dataclass(frozen=True)
class PromptRecord:
    prompt_id: str
    dataset: str
    mode: str
    k: int
    representation: str
    text: str
    image_path: str
    example_ids: tuple[int, ...]
    target_id: int
    expected_format: str

    def to_json(self) -> str:
        return json.dumps({
            "v": 1,
            "prompt_id": self.prompt_id,
            "dataset": self.dataset,
            "mode": self.mode,
            "k": self.k,
            "representation": self.representation,
            "text": self.text,
            "image_path": self.image_path,
            "example_ids": list(self.example_ids),
            "target_id": self.target_id,
            "expected_format": self.expected_format,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "PromptRecord":
        data = json.loads(line)
        return cls(
            prompt_id=data["prompt_id"],
            dataset=data["dataset"],
            mode=data["mode"],
            k=data["k"],
            representation=data["representation"],
            text=data["text"],
            image_path=data["image_path"],
            example_ids=tuple(data["example_ids"]),
            target_id=data["target_id"],
            expected_format=data["expected_format"],
        )


_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")


def render_template(task: TaskSpec, section: str, representation: str,
                    values: dict[str, str]) -> str:
    """Interpolate a template section; unknown placeholders are errors."""
    template = load_template(task.name, section)
    allowed = {"representation", "molecule", "property", "dataset"}
    allowed.add("smiles" if representation == SMILES_REPR else "selfies")
    out = []
    position = 0
    for match in _PLACEHOLDER_RE.finditer(template):
        name = match.group(1)
        if name not in allowed:
            raise UnknownPlaceholder(
                f"template {task.name}/{section}: placeholder {{{name}}} not "
                f"available under {representation}")
        out.append(template[position:match.start()])
        out.append(values.get(name, ""))
        position = match.end()
    out.append(template[position:])
    return "".join(out).strip()


def molecule_string(record: MoleculeRecord, representation: str) -> str:
    return record.smiles if representation == SMILES_REPR else record.selfies


def format_answer(task: TaskSpec, labels: tuple) -> str:
    if task.kind == CLASSIFICATION:
        return "Yes" if labels[0] else "No"
    if task.kind == REGRESSION:
        return _sig3(labels[0])
    if task.kind == MULTI_REGRESSION:
        return "\n".join(
            f"{name}: {_sig3(value)}" for name, value in zip(task.label_columns, labels)
        )
    return str(labels[0])


def _sig3(value: float) -> str:
    return f"{float(value):.3g}"


def select_icl_examples(target: MoleculeRecord, train_index: SimilarityIndex,
                        k: int) -> list[int]:
    """Tanimoto-nearest train ids; the target's own id is never returned."""
    if k == 0:
        return []
    available = len(train_index) - (1 if target.id in set(train_index.ids) else 0)
    if available < k:
        raise InsufficientExamples(
            f"need {k} examples, train index offers {available}")
    from ..chem import parse_smiles

    query = morgan_fingerprint(parse_smiles(target.canonical), source_id=target.id)
    return [mol_id for mol_id, _ in top_k_similar(query, train_index, k)]


def build_prompt(
    target: MoleculeRecord,
    task: TaskSpec,
    mode: PromptMode,
    representation: str,
    train_records: dict[int, MoleculeRecord],
    train_index: Optional[SimilarityIndex],
) -> PromptRecord:
    values = {
        "representation": representation,
        "molecule": molecule_string(target, representation),
        "property": task.property_description,
        "dataset": task.name,
    }
    sections = [render_template(task, "outline", representation, values)]

    if mode.kind != ZERO_SHOT:
        sections.append(render_template(task, "instruction", representation, values))

    example_ids: list[int] = []
    if mode.kind in (ICL, COT) and mode.k > 0:
        if train_index is None:
            raise InsufficientExamples("no train index supplied for example selection")
        example_ids = select_icl_examples(target, train_index, mode.k)
        lines = ["Examples:"]
        for position, mol_id in enumerate(example_ids, start=1):
            example = train_records[mol_id]
            lines.append(f"Example {position}:")
            lines.append(f"{representation}: {molecule_string(example, representation)}")
            lines.append(f"Answer: {format_answer(task, example.labels)}")
        sections.append("\n".join(lines))

    if mode.kind == COT:
        sections.append(render_template(task, "cot", representation, values))

    sections.append(render_template(task, "question", representation, values))

    return PromptRecord(
        prompt_id=f"{task.name}:{mode.tag}:{representation.lower()}:{target.id}",
        dataset=task.name,
        mode=mode.kind,
        k=mode.k,
        representation=representation,
        text="\n\n".join(sections),
        image_path=target.image_path,
        example_ids=tuple(example_ids),
        target_id=target.id,
        expected_format=task.expected_format,
    )


def build_prompts(
    targets: Iterable[MoleculeRecord],
    task: TaskSpec,
    mode: PromptMode,
    representation: str,
    train: list[MoleculeRecord],
) -> list[PromptRecord]:
    """Assemble prompts for every target against a shared train index."""
    from ..chem import parse_smiles

    train_records = {record.id: record for record in train}
    index: Optional[SimilarityIndex] = None
    if mode.kind in (ICL, COT) and mode.k > 0:
        index = SimilarityIndex(2048, 2)
        for record in train:
            index.add(record.id,
                      morgan_fingerprint(parse_smiles(record.canonical),
                                         source_id=record.id))
    return [
        build_prompt(target, task, mode, representation, train_records, index)
        for target in targets
    ]


def write_prompts(prompts: list[PromptRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for prompt in prompts:
            fh.write(prompt.to_json() + "\n")


def read_prompts(path) -> list[PromptRecord]:
    with open(path, encoding="utf-8") as fh:
        return [PromptRecord.from_json(line) for line in fh if line.strip()]
