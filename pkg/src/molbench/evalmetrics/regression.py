"""MAE and RMSE for the numeric tasks; unparsed answers are excluded."""

from __future__ import annotations

import math

from ..errors import EmptyScoredSet
from .parsing import ParsedAnswer


def regression_metrics(preds: list[ParsedAnswer], golds: list[float]) -> tuple[float, float]:
    if len(preds) != len(golds):
        raise ValueError("preds and golds must pair up")
    errors = [abs(p.number - g) for p, g in zip(preds, golds) if p.ok]
    if not errors:
        raise EmptyScoredSet("no parseable numeric answers")
    mae = sum(errors) / len(errors)
    rmse = math.sqrt(sum(e * e for e in errors) / len(errors))
    return mae, rmse


def vector_regression_metrics(
    preds: list[ParsedAnswer], golds: list[tuple[float, ...]], n_targets: int
) -> tuple[float, float, list[float]]:
    """Flattened MAE/RMSE plus per-target MAE (the all-together setting)."""
    if len(preds) != len(golds):
        raise ValueError("preds and golds must pair up")
    per_target_errors: list[list[float]] = [[] for _ in range(n_targets)]
    flat: list[float] = []
    for pred, gold in zip(preds, golds):
        if not pred.ok:
            continue
        for position in range(n_targets):
            error = abs(pred.vector[position] - gold[position])
            per_target_errors[position].append(error)
            flat.append(error)
    if not flat:
        raise EmptyScoredSet("no parseable vector answers")
    mae = sum(flat) / len(flat)
    rmse = math.sqrt(sum(e * e for e in flat) / len(flat))
    per_target = [
        sum(errors) / len(errors) if errors else float("nan")
        for errors in per_target_errors
    ]
    return mae, rmse, per_target
