"""Train job configuration, loaded from TOML.

The frozen-component list is explicit: the default freezes the base encoder
weights everywhere and trains LoRA adapters plus the task/projection heads.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class TrainJob:
    base_model: str = "stub-encoder"
    lora_rank: int = 16
    lora_alpha: float = 32.0
    lora_dropout: float = 0.05
    frozen: tuple[str, ...] = ("encoder.base",)
    contrastive_weight: float = 1.0   # lambda in the combined loss
    temperature: float = 0.5          # tau
    epochs: int = 1
    data_fraction: float = 1.0
    seed: int = 42
    batch_size: int = 5
    learning_rate: float = 0.05

    def __post_init__(self):
        if not (0.0 < self.data_fraction <= 1.0):
            raise ValueError("data_fraction must be in (0, 1]")
        if self.contrastive_weight < 0:
            raise ValueError("contrastive weight must be >= 0")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.lora_rank < 1:
            raise ValueError("lora_rank must be >= 1")


def load_job(path: str | Path) -> TrainJob:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    section = data.get("job", data)
    kwargs = {}
    for name in ("base_model", "lora_rank", "lora_alpha", "lora_dropout",
                 "contrastive_weight", "temperature", "epochs", "data_fraction",
                 "seed", "batch_size", "learning_rate"):
        if name in section:
            kwargs[name] = section[name]
    if "frozen" in section:
        kwargs["frozen"] = tuple(section["frozen"])
    return TrainJob(**kwargs)
