"""Aggregation of MetricReports into paper-style tables and rankings.

Classification cells render as "acc(f1)" with two decimals, regression cells
as the per-dataset headline error (RMSE for esol, MAE elsewhere), description
cells as the six-metric average on the x100 scale. CSV carries raw
full-precision values so re-ingesting reproduces the grid exactly.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..datasets import CLASSIFICATION, DESCRIPTION, MULTI_REGRESSION, REGRESSION
from ..evalmetrics import MetricReport

# per-dataset headline error metric for regression ranking
HEADLINE_ERROR = {"esol": "rmse"}
_DESCRIPTION_METRICS = ("bleu2", "bleu4", "rouge1", "rouge2", "rougeL", "meteor")

_FAMILY_OF_KIND = {
    CLASSIFICATION: "classification",
    REGRESSION: "regression",
    MULTI_REGRESSION: "regression",
    DESCRIPTION: "description",
}


@dataclass
class ResultsGrid:
    cells: dict[tuple[str, str, str], MetricReport] = field(default_factory=dict)

    def add(self, report: MetricReport) -> None:
        key = (report.model, report.dataset, report.mode)
        if key in self.cells:
            raise ValueError(f"duplicate cell {key}")
        self.cells[key] = report

    def models(self) -> list[str]:
        return sorted({model for model, _, _ in self.cells})

    def datasets(self, family: Optional[str] = None) -> list[str]:
        names = []
        for (_, dataset, _), report in self.cells.items():
            if family is None or _FAMILY_OF_KIND[report.task_kind] == family:
                names.append(dataset)
        return sorted(set(names))

    def lookup(self, model: str, dataset: str) -> Optional[MetricReport]:
        matches = [report for (m, d, _), report in self.cells.items()
                   if m == model and d == dataset]
        return matches[0] if matches else None

    @classmethod
    def from_report_files(cls, paths) -> "ResultsGrid":
        grid = cls()
        for path in paths:
            grid.add(MetricReport.load(path))
        return grid


def headline_value(report: MetricReport) -> Optional[float]:
    """The single number a dataset column ranks by."""
    if report.task_kind == CLASSIFICATION:
        return report.accuracy
    if report.task_kind in (REGRESSION, MULTI_REGRESSION):
        metric = HEADLINE_ERROR.get(report.dataset, "mae")
        return getattr(report, metric)
    values = [getattr(report, name) for name in _DESCRIPTION_METRICS]
    values = [v for v in values if v is not None]
    return sum(values) / len(values) if values else None


def _cell_text(report: Optional[MetricReport]) -> str:
    if report is None:
        return "—"
    if report.task_kind == CLASSIFICATION:
        return f"{report.accuracy:.2f}({report.f1:.2f})"
    if report.task_kind in (REGRESSION, MULTI_REGRESSION):
        return f"{headline_value(report):.3f}"
    return f"{headline_value(report) * 100.0:.2f}"


def render_table(grid: ResultsGrid, task_family: str) -> tuple[str, str, list[str]]:
    """(markdown, csv, warnings) for one task family."""
    if task_family not in ("classification", "regression", "description"):
        raise ValueError(f"unknown task family {task_family!r}")
    datasets = grid.datasets(task_family)
    if not datasets:
        raise ValueError(f"grid holds no {task_family} cells")
    models = grid.models()
    warnings: list[str] = []
    if task_family == "regression" and len(datasets) > 1:
        warnings.append(
            "regression Average mixes per-dataset headline errors "
            "(RMSE/MAE, heterogeneous units)")

    header = ["Model"] + datasets + ["Average"]
    rows_md: list[list[str]] = []
    rows_csv: list[list[str]] = []
    for model in models:
        md_row = [model]
        csv_row = [model]
        values = []
        for dataset in datasets:
            report = grid.lookup(model, dataset)
            if report is None:
                warnings.append(f"missing cell: {model} x {dataset}")
                md_row.append("—")
                csv_row.append("")
                continue
            md_row.append(_cell_text(report))
            value = headline_value(report)
            values.append(value)
            if report.task_kind == CLASSIFICATION:
                csv_row.append(f"{report.accuracy!r}|{report.f1!r}")
            else:
                csv_row.append(repr(value))
        if values:
            average = sum(values) / len(values)
            if task_family == "classification":
                f1_values = [grid.lookup(model, d).f1 for d in datasets
                             if grid.lookup(model, d) is not None]
                f1_average = sum(f1_values) / len(f1_values)
                md_row.append(f"{average:.2f}({f1_average:.2f})")
            elif task_family == "regression":
                md_row.append(f"{average:.3f}")
            else:
                md_row.append(f"{average * 100.0:.2f}")
            csv_row.append(repr(average))
        else:
            md_row.append("—")
            csv_row.append("")
        rows_md.append(md_row)
        rows_csv.append(csv_row)

    md_lines = ["| " + " | ".join(header) + " |",
                "|" + "|".join("---" for _ in header) + "|"]
    md_lines += ["| " + " | ".join(row) + " |" for row in rows_md]
    markdown = "\n".join(md_lines) + "\n"

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows_csv)
    return markdown, buffer.getvalue(), warnings


def grid_to_csv(grid: ResultsGrid) -> str:
    """Full-precision dump of every cell; round-trips via grid_from_csv."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["model", "dataset", "mode", "report_json"])
    for key in sorted(grid.cells):
        report = grid.cells[key]
        writer.writerow([*key, json.dumps(report.to_dict(), sort_keys=True)])
    return buffer.getvalue()


def grid_from_csv(text: str) -> ResultsGrid:
    grid = ResultsGrid()
    reader = csv.reader(io.StringIO(text))
    next(reader)  # header
    for row in reader:
        data = json.loads(row[3])
        data.pop("v", None)
        data.pop("scaled_x100", None)
        grid.add(MetricReport(**data))
    return grid


@dataclass
class RankTable:
    """Average rank per model within each task family (1 = best)."""

    families: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_markdown(self) -> str:
        families = sorted(self.families)
        models = sorted({m for ranks in self.families.values() for m in ranks})
        lines = ["| Model | " + " | ".join(families) + " |",
                 "|" + "|".join("---" for _ in range(len(families) + 1)) + "|"]
        for model in models:
            cells = [
                f"{self.families[f][model]:.2f}" if model in self.families.get(f, {})
                else "—"
                for f in families
            ]
            lines.append("| " + model + " | " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def rank_models(grid: ResultsGrid) -> RankTable:
    """Per dataset: rank models by the headline metric; ties share the better
    (lower) rank; average across each family's datasets."""
    models = grid.models()
    if len(models) < 2:
        raise ValueError("ranking needs at least two models")
    per_family: dict[str, dict[str, list[float]]] = {}
    for family in ("classification", "regression", "description"):
        for dataset in grid.datasets(family):
            scored = []
            for model in models:
                report = grid.lookup(model, dataset)
                if report is None:
                    continue
                value = headline_value(report)
                scored.append((model, value))
            if len(scored) < 2:
                continue
            reverse = family != "regression"  # errors rank ascending
            ordered = sorted(scored, key=lambda pair: pair[1], reverse=reverse)
            ranks: dict[str, float] = {}
            position = 0
            previous_value = None
            for index, (model, value) in enumerate(ordered, start=1):
                if value != previous_value:
                    position = index
                    previous_value = value
                ranks[model] = float(position)
            bucket = per_family.setdefault(family, {})
            for model, rank in ranks.items():
                bucket.setdefault(model, []).append(rank)
    return RankTable({
        family: {model: sum(ranks) / len(ranks) for model, ranks in models_ranks.items()}
        for family, models_ranks in per_family.items()
    })
