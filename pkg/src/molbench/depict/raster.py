"""Rasterization of the SVG subset emitted by render_svg, plus PNG export.

The renderer is deliberately self-contained (distance-tested strokes, the
embedded 5x7 font, no antialiasing) so identical inputs yield identical
bytes on any platform.
"""

from __future__ import annotations

import math
import re
import struct
import xml.etree.ElementTree as ET
import zlib
from dataclasses import dataclass

import numpy as np

from ..errors import UnsupportedSvgFeature
from .font5x7 import GLYPH_HEIGHT, GLYPH_WIDTH, GLYPHS

_SVG_NS = "{http://www.w3.org/2000/svg}"


@dataclass
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row-major RGB

    def __post_init__(self):
        expected = (self.height, self.width, 3)
        if self.pixels.shape != expected:
            raise ValueError(f"pixel buffer {self.pixels.shape} != {expected}")

    @classmethod
    def blank(cls, width: int, height: int, value: int = 255) -> "RasterImage":
        return cls(width, height, np.full((height, width, 3), value, dtype=np.uint8))

    def copy(self) -> "RasterImage":
        return RasterImage(self.width, self.height, self.pixels.copy())

    def __eq__(self, other) -> bool:
        return (isinstance(other, RasterImage)
                and self.width == other.width
                and self.height == other.height
                and bool(np.array_equal(self.pixels, other.pixels)))

    def ink_count(self) -> int:
        """Number of non-white pixels."""
        return int((self.pixels != 255).any(axis=2).sum())


def _parse_color(value: str) -> tuple[int, int, int]:
    value = value.strip()
    if value.startswith("#") and len(value) == 7:
        return tuple(int(value[i : i + 2], 16) for i in (1, 3, 5))
    named = {"black": (0, 0, 0), "white": (255, 255, 255)}
    if value in named:
        return named[value]
    raise UnsupportedSvgFeature(f"unsupported color {value!r}")


def rasterize(svg: bytes, width: int, height: int) -> RasterImage:
    """Deterministic rasterization of the supported subset (rect/line/text)."""
    try:
        root = ET.fromstring(svg.decode())
    except ET.ParseError as exc:
        raise UnsupportedSvgFeature(f"unparseable SVG: {exc}") from None
    if root.tag not in ("svg", f"{_SVG_NS}svg"):
        raise UnsupportedSvgFeature(f"root element {root.tag!r}")
    svg_w = float(root.get("width", width))
    svg_h = float(root.get("height", height))
    sx = width / svg_w
    sy = height / svg_h

    image = RasterImage.blank(width, height)
    buf = image.pixels
    for element in root:
        tag = element.tag.removeprefix(_SVG_NS)
        if tag == "rect":
            color = _parse_color(element.get("fill", "#ffffff"))
            x0 = float(element.get("x", 0)) * sx
            y0 = float(element.get("y", 0)) * sy
            x1 = x0 + float(element.get("width", 0)) * sx
            y1 = y0 + float(element.get("height", 0)) * sy
            _fill_rect(buf, x0, y0, x1, y1, color)
        elif tag == "line":
            color = _parse_color(element.get("stroke", "#000000"))
            half = float(element.get("stroke-width", 1.0)) * (sx + sy) / 4.0
            _draw_segment(
                buf,
                float(element.get("x1", 0)) * sx, float(element.get("y1", 0)) * sy,
                float(element.get("x2", 0)) * sx, float(element.get("y2", 0)) * sy,
                half, color,
            )
        elif tag == "text":
            color = _parse_color(element.get("fill", "#000000"))
            size = float(element.get("font-size", 12.0)) * sy
            if element.get("text-anchor", "middle") != "middle":
                raise UnsupportedSvgFeature("only middle-anchored text is supported")
            _draw_text(
                buf,
                float(element.get("x", 0)) * sx, float(element.get("y", 0)) * sy,
                element.text or "", size, color,
            )
        else:
            raise UnsupportedSvgFeature(f"unsupported element <{tag}>")
    return image


def _fill_rect(buf, x0, y0, x1, y1, color):
    h, w = buf.shape[:2]
    ix0 = max(0, int(math.floor(x0)))
    iy0 = max(0, int(math.floor(y0)))
    ix1 = min(w, int(math.ceil(x1)))
    iy1 = min(h, int(math.ceil(y1)))
    if ix0 < ix1 and iy0 < iy1:
        buf[iy0:iy1, ix0:ix1] = color


def _draw_segment(buf, x0, y0, x1, y1, half_width, color):
    """Paint pixels whose center lies within half_width of the segment."""
    h, w = buf.shape[:2]
    pad = half_width + 1.0
    ix0 = max(0, int(math.floor(min(x0, x1) - pad)))
    iy0 = max(0, int(math.floor(min(y0, y1) - pad)))
    ix1 = min(w - 1, int(math.ceil(max(x0, x1) + pad)))
    iy1 = min(h - 1, int(math.ceil(max(y0, y1) + pad)))
    if ix1 < ix0 or iy1 < iy0:
        return
    ys, xs = np.mgrid[iy0 : iy1 + 1, ix0 : ix1 + 1]
    px = xs + 0.5
    py = ys + 0.5
    dx, dy = x1 - x0, y1 - y0
    seg_sq = dx * dx + dy * dy
    if seg_sq < 1e-12:
        dist_sq = (px - x0) ** 2 + (py - y0) ** 2
    else:
        t = np.clip(((px - x0) * dx + (py - y0) * dy) / seg_sq, 0.0, 1.0)
        dist_sq = (px - (x0 + t * dx)) ** 2 + (py - (y0 + t * dy)) ** 2
    mask = dist_sq <= half_width * half_width
    region = buf[iy0 : iy1 + 1, ix0 : ix1 + 1]
    region[mask] = color


def _draw_text(buf, cx, cy, text, size, color):
    """Block glyphs centered at (cx, cy); cell advance is 6 units of 8."""
    if not text:
        return
    unit = size / 8.0
    advance = (GLYPH_WIDTH + 1) * unit
    total = advance * len(text) - unit
    x = cx - total / 2.0
    top = cy - (GLYPH_HEIGHT / 2.0) * unit
    for char in text:
        glyph = GLYPHS.get(char)
        if glyph is None:
            raise UnsupportedSvgFeature(f"no glyph for {char!r}")
        for row_idx, row in enumerate(glyph):
            for col in range(GLYPH_WIDTH):
                if row & (1 << (GLYPH_WIDTH - 1 - col)):
                    _fill_rect(
                        buf,
                        x + col * unit,
                        top + row_idx * unit,
                        x + (col + 1) * unit,
                        top + (row_idx + 1) * unit,
                        color,
                    )
        x += advance


# --- PNG export ---------------------------------------------------------------


def write_png(image: RasterImage) -> bytes:
    """Minimal RGB8 PNG encoder (zlib-deflated, filter 0 on every row)."""

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (struct.pack(">I", len(payload)) + tag + payload
                + struct.pack(">I", zlib.crc32(tag + payload)))

    header = struct.pack(">IIBBBBB", image.width, image.height, 8, 2, 0, 0, 0)
    raw = b"".join(
        b"\x00" + image.pixels[row].tobytes() for row in range(image.height)
    )
    return b"".join([
        b"\x89PNG\r\n\x1a\n",
        chunk(b"IHDR", header),
        chunk(b"IDAT", zlib.compress(raw, 9)),
        chunk(b"IEND", b""),
    ])


def save_png(image: RasterImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_png(image))
