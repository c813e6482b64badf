"""Template asset loading with checksum manifest verification.

Templates are data, not code: one directory per dataset with outline,
instruction, question, and cot sections. Leading '#' lines are headers and
are stripped before interpolation. MANIFEST.txt pins a sha256 per file so
fixture drift is caught immediately.
"""

from __future__ import annotations

import hashlib
from importlib import resources

from ..errors import MissingTemplate

SECTIONS = ("outline", "instruction", "question", "cot")


def _root():
    return resources.files("molbench.prompts").joinpath("templates")


def load_template(dataset: str, section: str) -> str:
    if section not in SECTIONS:
        raise MissingTemplate(f"unknown section {section!r}")
    candidate = _root().joinpath(f"{dataset}/{section}.txt")
    try:
        text = candidate.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingTemplate(f"no template {dataset}/{section}.txt") from None
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return "\n".join(lines).strip()


def checksum_manifest() -> dict[str, str]:
    """Parse MANIFEST.txt into {relative path: sha256}."""
    text = _root().joinpath("MANIFEST.txt").read_text(encoding="utf-8")
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        digest, path = line.split(None, 1)
        out[path.strip()] = digest
    return out


def verify_templates() -> list[str]:
    """Return mismatched template paths (empty when everything is intact)."""
    bad = []
    for rel_path, expected in checksum_manifest().items():
        data = _root().joinpath(rel_path).read_bytes()
        if hashlib.sha256(data).hexdigest() != expected:
            bad.append(rel_path)
    return bad
