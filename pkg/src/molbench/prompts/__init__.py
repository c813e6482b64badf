"""Prompt assembly for all modes and both text representations."""

from .build import (
    COT,
    ICL,
    SELFIES_REPR,
    SMILES_REPR,
    ZERO_SHOT,
    PromptMode,
    PromptRecord,
    build_prompt,
    build_prompts,
    format_answer,
    read_prompts,
    render_template,
    select_icl_examples,
    write_prompts,
)
from .templates import load_template, verify_templates

__all__ = [
    "PromptMode",
    "PromptRecord",
    "build_prompt",
    "build_prompts",
    "select_icl_examples",
    "render_template",
    "format_answer",
    "write_prompts",
    "read_prompts",
    "load_template",
    "verify_templates",
    "ZERO_SHOT",
    "ICL",
    "COT",
    "SMILES_REPR",
    "SELFIES_REPR",
]
