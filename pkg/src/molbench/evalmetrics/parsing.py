"""Answer extraction from raw model responses.

Parsers never raise on messy text; they return unparsed status instead, and
the metric layer decides how unparsed answers are scored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

YES_TOKENS = ("yes", "true")
NO_TOKENS = ("no", "false")

_WORD_RE = re.compile(r"[a-z]+")
_NUMBER_RE = re.compile(r"[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?")


@dataclass(frozen=True)
class ParsedAnswer:
    status: str  # "ok" | "unparsed"
    yes_no: Optional[bool] = None
    number: Optional[float] = None
    vector: Optional[tuple[float, ...]] = None
    text: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


UNPARSED = ParsedAnswer("unparsed")


def parse_binary(text: str) -> ParsedAnswer:
    """First decisive yes/no token wins; case-insensitive, word-bounded."""
    for word in _WORD_RE.findall(text.lower()):
        if word in YES_TOKENS:
            return ParsedAnswer("ok", yes_no=True)
        if word in NO_TOKENS:
            return ParsedAnswer("ok", yes_no=False)
    return UNPARSED


def parse_numeric(text: str) -> ParsedAnswer:
    """First decimal or scientific literal in the text."""
    match = _NUMBER_RE.search(text)
    if not match:
        return UNPARSED
    return ParsedAnswer("ok", number=float(match.group()))


def parse_vector(text: str, n: int = 12) -> ParsedAnswer:
    """First ``n`` numeric literals, in order; fewer than ``n`` is unparsed."""
    values = _NUMBER_RE.findall(text)
    if len(values) < n:
        return UNPARSED
    return ParsedAnswer("ok", vector=tuple(float(v) for v in values[:n]))


def parse_free_text(text: str) -> ParsedAnswer:
    stripped = text.strip()
    if not stripped:
        return UNPARSED
    return ParsedAnswer("ok", text=stripped)


def parse_answer(text: str, expected_format: str) -> ParsedAnswer:
    if expected_format == "yes_no":
        return parse_binary(text)
    if expected_format == "number":
        return parse_numeric(text)
    if expected_format == "number_vector":
        return parse_vector(text)
    if expected_format == "free_text":
        return parse_free_text(text)
    raise ValueError(f"unknown expected format {expected_format!r}")
