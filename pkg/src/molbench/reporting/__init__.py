"""Results aggregation: tables, CSV round-trip, model ranking."""

from .grid import (
    RankTable,
    ResultsGrid,
    grid_from_csv,
    grid_to_csv,
    headline_value,
    rank_models,
    render_table,
)

__all__ = [
    "ResultsGrid",
    "RankTable",
    "render_table",
    "rank_models",
    "headline_value",
    "grid_to_csv",
    "grid_from_csv",
]
