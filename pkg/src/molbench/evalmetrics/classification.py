"""Accuracy and F1 for the yes/no tasks.

Unparsed answers count as incorrect for accuracy and as negative-class
predictions for F1 (biasing scores down rather than up). The positive class
is "Yes"; undefined precision or recall yields F1 = 0 with a diagnostic.
"""

from __future__ import annotations

from typing import Optional

from ..errors import EmptyScoredSet
from .parsing import ParsedAnswer


def classification_metrics(
    preds: list[ParsedAnswer], golds: list[bool]
) -> tuple[float, float, Optional[str]]:
    """(accuracy, f1, diagnostic) over paired predictions and gold labels."""
    if len(preds) != len(golds):
        raise ValueError("preds and golds must pair up")
    if not preds:
        raise EmptyScoredSet("no answers to score")
    correct = 0
    tp = fp = fn = 0
    for pred, gold in zip(preds, golds):
        predicted = pred.yes_no if pred.ok else False  # unparsed -> negative
        if pred.ok and predicted == gold:
            correct += 1
        if predicted and gold:
            tp += 1
        elif predicted and not gold:
            fp += 1
        elif not predicted and gold:
            fn += 1
    accuracy = correct / len(preds)
    diagnostic = None
    if tp + fp == 0 or tp + fn == 0:
        f1 = 0.0
        diagnostic = "precision or recall undefined (no positive predictions or golds)"
    else:
        precision = tp / (tp + fp)
        recall = tp / (tp + fn)
        if precision + recall == 0:
            f1 = 0.0
            diagnostic = "zero precision and recall"
        else:
            f1 = 2 * precision * recall / (precision + recall)
    return accuracy, f1, diagnostic
