"""Endpoint configuration, loadable from TOML.

Secrets stay out of config files: ``api_key_env`` names the environment
variable holding the key, which is resolved only at request time.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model_name: str
    api_key_env: str = ""
    temperature: float = 0.0
    max_tokens: int = 512
    timeout: float = 60.0
    max_retries: int = 3
    concurrency_limit: int = 4

    def __post_init__(self):
        if not (0.0 <= self.temperature <= 2.0):
            raise ValueError("temperature must be in [0, 2]")
        if self.concurrency_limit < 1:
            raise ValueError("concurrency_limit must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


def load_endpoint_config(path: str | Path) -> EndpointConfig:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    section = data.get("endpoint", data)
    return EndpointConfig(
        base_url=section["base_url"],
        model_name=section["model_name"],
        api_key_env=section.get("api_key_env", ""),
        temperature=float(section.get("temperature", 0.0)),
        max_tokens=int(section.get("max_tokens", 512)),
        timeout=float(section.get("timeout", 60.0)),
        max_retries=int(section.get("max_retries", 3)),
        concurrency_limit=int(section.get("concurrency_limit", 4)),
    )
