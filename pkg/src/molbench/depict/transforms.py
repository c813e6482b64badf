"""The image augmentation transform family used for positive-pair views.

Right-angle rotations and flips are exact pixel permutations, so the algebra
identities (Rotate180 twice = identity, Rotate90 twice = Rotate180) hold
pixel-exact. Diagonal rotations expand the canvas, sample bilinearly, and
pad with white.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .raster import RasterImage

ROTATIONS = {
    "Rotate45": 45,
    "Rotate90": 90,
    "Rotate135": 135,
    "Rotate180": 180,
    "Rotate225": 225,
    "Rotate270": 270,
    "Rotate315": 315,
}

TRANSFORM_KINDS = tuple(ROTATIONS) + (
    "FlipH",
    "FlipV",
    "Solarize",
    "Posterize",
    "AutoContrast",
)


@dataclass(frozen=True)
class Transform:
    kind: str
    threshold: int = 128  # Solarize
    bits: int = 4         # Posterize

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise ValueError(f"unknown transform {self.kind!r}")
        if self.kind == "Posterize" and not (1 <= self.bits <= 8):
            raise ValueError("posterize bits must be in [1, 8]")
        if self.kind == "Solarize" and not (0 <= self.threshold <= 255):
            raise ValueError("solarize threshold must be in [0, 255]")

    def spec(self) -> str:
        if self.kind == "Solarize":
            return f"Solarize({self.threshold})"
        if self.kind == "Posterize":
            return f"Posterize({self.bits})"
        return self.kind


def default_transform_pool() -> list[Transform]:
    """The transform list drawn from when building Aug positive pairs."""
    pool = [Transform(name) for name in ROTATIONS]
    pool.extend([
        Transform("FlipH"),
        Transform("FlipV"),
        Transform("Solarize", threshold=128),
        Transform("Posterize", bits=4),
        Transform("AutoContrast"),
    ])
    return pool


def apply_transform(image: RasterImage, transform: Transform) -> RasterImage:
    kind = transform.kind
    if kind in ("Rotate90", "Rotate180", "Rotate270"):
        k = ROTATIONS[kind] // 90
        rotated = np.rot90(image.pixels, k=k).copy()
        return RasterImage(rotated.shape[1], rotated.shape[0], rotated)
    if kind in ROTATIONS:
        return _rotate_arbitrary(image, ROTATIONS[kind])
    if kind == "FlipH":
        return RasterImage(image.width, image.height, np.fliplr(image.pixels).copy())
    if kind == "FlipV":
        return RasterImage(image.width, image.height, np.flipud(image.pixels).copy())
    if kind == "Solarize":
        pixels = image.pixels.copy()
        mask = pixels >= transform.threshold
        pixels[mask] = 255 - pixels[mask]
        return RasterImage(image.width, image.height, pixels)
    if kind == "Posterize":
        keep = 0xFF & ~((1 << (8 - transform.bits)) - 1)
        return RasterImage(image.width, image.height, image.pixels & np.uint8(keep))
    if kind == "AutoContrast":
        return _auto_contrast(image)
    raise ValueError(f"unknown transform {kind!r}")


def _rotate_arbitrary(image: RasterImage, degrees: int) -> RasterImage:
    """Counterclockwise rotation with canvas expansion and white padding."""
    theta = math.radians(degrees)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    w, h = image.width, image.height
    new_w = int(math.ceil(abs(w * cos_t) + abs(h * sin_t)))
    new_h = int(math.ceil(abs(w * sin_t) + abs(h * cos_t)))

    ys, xs = np.mgrid[0:new_h, 0:new_w]
    # map output pixel centers back into source coordinates (inverse rotation
    # about the canvas centers; image y axis points down, so the screen-space
    # inverse of a CCW rotation uses the same matrix layout as a math-space CW)
    ox = xs + 0.5 - new_w / 2.0
    oy = ys + 0.5 - new_h / 2.0
    src_x = cos_t * ox - sin_t * oy + w / 2.0 - 0.5
    src_y = sin_t * ox + cos_t * oy + h / 2.0 - 0.5

    x0 = np.floor(src_x).astype(np.int64)
    y0 = np.floor(src_y).astype(np.int64)
    fx = src_x - x0
    fy = src_y - y0

    out = np.empty((new_h, new_w, 3), dtype=np.float64)
    padded = np.full((h + 2, w + 2, 3), 255.0)
    padded[1 : h + 1, 1 : w + 1] = image.pixels
    cx0 = np.clip(x0 + 1, 0, w + 1)
    cx1 = np.clip(x0 + 2, 0, w + 1)
    cy0 = np.clip(y0 + 1, 0, h + 1)
    cy1 = np.clip(y0 + 2, 0, h + 1)
    inside = (src_x > -1.0) & (src_x < w) & (src_y > -1.0) & (src_y < h)
    for c in range(3):
        plane = padded[:, :, c]
        top = plane[cy0, cx0] * (1 - fx) + plane[cy0, cx1] * fx
        bottom = plane[cy1, cx0] * (1 - fx) + plane[cy1, cx1] * fx
        out[:, :, c] = top * (1 - fy) + bottom * fy
    out[~inside] = 255.0
    pixels = np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)
    return RasterImage(new_w, new_h, pixels)


def _auto_contrast(image: RasterImage) -> RasterImage:
    """Per-channel linear stretch computed over ink (non-white) pixels only."""
    pixels = image.pixels
    ink = (pixels != 255).any(axis=2)
    if not ink.any():
        return image.copy()
    out = pixels.copy()
    for c in range(3):
        channel = pixels[:, :, c]
        values = channel[ink]
        lo, hi = int(values.min()), int(values.max())
        if lo == hi:
            continue
        stretched = np.floor((channel.astype(np.float64) - lo) * 255.0 / (hi - lo) + 0.5)
        out[:, :, c] = np.clip(stretched, 0, 255).astype(np.uint8)
    return RasterImage(image.width, image.height, out)
