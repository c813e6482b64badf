"""Readers for the benchmark's file interfaces.

The trainer touches only documented schemas: the dataset manifest JSONL
(id/smiles/labels/image_path), the split manifest JSON, the pair manifest
JSONL, and PNG depictions. Nothing here imports the benchmark package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import torch
from PIL import Image, ImageOps

IMAGE_SIZE = 32  # training-side downsample, grayscale


@dataclass(frozen=True)
class Sample:
    mol_id: int
    smiles: str
    label: float
    image_path: str


def read_manifest(path: str | Path) -> list[Sample]:
    samples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            samples.append(Sample(
                mol_id=row["id"],
                smiles=row["smiles"],
                label=float(row["labels"][0]),
                image_path=row["image_path"],
            ))
    return samples


def read_split(path: str | Path) -> tuple[list[int], list[int]]:
    data = json.loads(Path(path).read_text())
    return list(data["train_ids"]), list(data["test_ids"])


@dataclass(frozen=True)
class Pair:
    anchor_id: int
    anchor_image: str
    positive_id: Optional[int]
    positive_image: Optional[str]
    transforms: tuple[str, ...]


def read_pairs(path: str | Path) -> list[Pair]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            if "skipped_anchor" in row:
                continue
            pairs.append(Pair(
                anchor_id=row["anchor_id"],
                anchor_image=row["anchor_image"],
                positive_id=row["positive_id"],
                positive_image=row["positive_image"],
                transforms=tuple(row["transforms"]),
            ))
    return pairs


def load_image(root: str | Path, rel_path: str) -> torch.Tensor:
    """PNG -> normalized grayscale tensor of IMAGE_SIZE^2 features."""
    image = Image.open(Path(root) / rel_path).convert("L")
    return _to_tensor(image)


def _to_tensor(image: Image.Image) -> torch.Tensor:
    image = image.resize((IMAGE_SIZE, IMAGE_SIZE), Image.BILINEAR)
    # invert: ink becomes positive signal on a zero background
    data = 1.0 - np.asarray(image, dtype=np.float32) / 255.0
    return torch.from_numpy(data.reshape(-1))


def apply_named_transform(image: Image.Image, spec: str) -> Image.Image:
    """Interpret a transform spec string from the pair manifest."""
    if spec.startswith("Rotate"):
        degrees = int(spec.removeprefix("Rotate"))
        return image.rotate(degrees, expand=True, fillcolor=255)
    if spec == "FlipH":
        return ImageOps.mirror(image)
    if spec == "FlipV":
        return ImageOps.flip(image)
    if spec.startswith("Solarize"):
        threshold = int(spec[spec.index("(") + 1 : spec.index(")")])
        return ImageOps.solarize(image, threshold=threshold)
    if spec.startswith("Posterize"):
        bits = int(spec[spec.index("(") + 1 : spec.index(")")])
        return ImageOps.posterize(image, bits)
    if spec == "AutoContrast":
        return ImageOps.autocontrast(image)
    raise ValueError(f"unknown transform spec {spec!r}")


def load_pair_views(root: str | Path, pair: Pair) -> tuple[torch.Tensor, torch.Tensor]:
    """Two tensors forming one positive pair (Aug or T-Aug)."""
    anchor = Image.open(Path(root) / pair.anchor_image).convert("L")
    if pair.positive_image is None:
        first = apply_named_transform(anchor, pair.transforms[0])
        second = apply_named_transform(anchor, pair.transforms[1])
        return _to_tensor(first), _to_tensor(second)
    positive = Image.open(Path(root) / pair.positive_image).convert("L")
    return _to_tensor(anchor), _to_tensor(positive)
