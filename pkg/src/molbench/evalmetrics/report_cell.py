"""Join transcripts with gold labels and produce one MetricReport per cell."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..client import Transcript
from ..datasets import (
    CLASSIFICATION,
    DESCRIPTION,
    MULTI_REGRESSION,
    REGRESSION,
    MoleculeRecord,
    TaskSpec,
)
from ..errors import EmptyScoredSet
from ..prompts import PromptRecord
from .classification import classification_metrics
from .parsing import ParsedAnswer, parse_answer
from .regression import regression_metrics, vector_regression_metrics
from .textgen import bleu_n, meteor, rouge


@dataclass
class MetricReport:
    dataset: str
    model: str
    mode: str
    task_kind: str
    n_total: int
    n_scored: int
    n_unparsed: int
    parse_failure_rate: float
    accuracy: Optional[float] = None
    f1: Optional[float] = None
    f1_diagnostic: Optional[str] = None
    mae: Optional[float] = None
    rmse: Optional[float] = None
    per_target_mae: Optional[list[float]] = None
    bleu2: Optional[float] = None
    bleu4: Optional[float] = None
    rouge1: Optional[float] = None
    rouge2: Optional[float] = None
    rougeL: Optional[float] = None
    meteor: Optional[float] = None

    def to_dict(self) -> dict:
        out = {"v": 1}
        for key, value in self.__dict__.items():
            if value is not None:
                out[key] = value
        # description scores also rendered x100 to match table formatting
        if self.task_kind == DESCRIPTION and self.n_scored:
            out["scaled_x100"] = {
                name: round(getattr(self, name) * 100.0, 4)
                for name in ("bleu2", "bleu4", "rouge1", "rouge2", "rougeL", "meteor")
                if getattr(self, name) is not None
            }
        return out

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "MetricReport":
        data = json.loads(Path(path).read_text())
        data.pop("v", None)
        data.pop("scaled_x100", None)
        return cls(**data)


def evaluate_cell(
    prompts: list[PromptRecord],
    transcripts: list[Transcript],
    gold: dict[int, MoleculeRecord],
    task: TaskSpec,
    model: str,
) -> MetricReport:
    """Score one model x dataset x mode cell.

    Transcripts that errored (no response) are unparsed by definition;
    classification scores them as wrong, regression/description exclude them.
    """
    by_id = {t.prompt_id: t for t in transcripts}
    parsed: list[ParsedAnswer] = []
    targets: list[MoleculeRecord] = []
    for prompt in prompts:
        transcript = by_id.get(prompt.prompt_id)
        if transcript is None or transcript.response is None:
            parsed.append(ParsedAnswer("unparsed"))
        else:
            parsed.append(parse_answer(transcript.response, prompt.expected_format))
        targets.append(gold[prompt.target_id])

    n_total = len(parsed)
    n_scored = sum(1 for p in parsed if p.ok)
    n_unparsed = n_total - n_scored
    mode = prompts[0].mode if prompts else "unknown"
    report = MetricReport(
        dataset=task.name,
        model=model,
        mode=mode,
        task_kind=task.kind,
        n_total=n_total,
        n_scored=n_scored,
        n_unparsed=n_unparsed,
        parse_failure_rate=(n_unparsed / n_total) if n_total else 0.0,
    )

    if task.kind == CLASSIFICATION:
        golds = [bool(t.labels[0]) for t in targets]
        report.accuracy, report.f1, report.f1_diagnostic = \
            classification_metrics(parsed, golds)
    elif task.kind == REGRESSION:
        golds = [float(t.labels[0]) for t in targets]
        report.mae, report.rmse = regression_metrics(parsed, golds)
    elif task.kind == MULTI_REGRESSION:
        gold_vectors = [tuple(float(x) for x in t.labels) for t in targets]
        report.mae, report.rmse, report.per_target_mae = vector_regression_metrics(
            parsed, gold_vectors, len(task.label_columns))
    elif task.kind == DESCRIPTION:
        pairs = [(p.text, str(t.labels[0])) for p, t in zip(parsed, targets) if p.ok]
        if not pairs:
            raise EmptyScoredSet("no parseable descriptions")
        report.bleu2 = _mean(bleu_n(c, [r], 2) for c, r in pairs)
        report.bleu4 = _mean(bleu_n(c, [r], 4) for c, r in pairs)
        report.rouge1 = _mean(rouge(c, r, "1") for c, r in pairs)
        report.rouge2 = _mean(rouge(c, r, "2") for c, r in pairs)
        report.rougeL = _mean(rouge(c, r, "L") for c, r in pairs)
        report.meteor = _mean(meteor(c, r) for c, r in pairs)
    else:
        raise ValueError(f"unknown task kind {task.kind!r}")
    return report


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values)
