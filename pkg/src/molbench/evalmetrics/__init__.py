"""Answer parsing and the benchmark's metric set."""

from .classification import classification_metrics
from .parsing import (
    ParsedAnswer,
    parse_answer,
    parse_binary,
    parse_free_text,
    parse_numeric,
    parse_vector,
)
from .regression import regression_metrics, vector_regression_metrics
from .report_cell import MetricReport, evaluate_cell
from .textgen import bleu_n, meteor, rouge, tokenize

__all__ = [
    "ParsedAnswer",
    "parse_answer",
    "parse_binary",
    "parse_numeric",
    "parse_vector",
    "parse_free_text",
    "classification_metrics",
    "regression_metrics",
    "vector_regression_metrics",
    "bleu_n",
    "rouge",
    "meteor",
    "tokenize",
    "MetricReport",
    "evaluate_cell",
]
