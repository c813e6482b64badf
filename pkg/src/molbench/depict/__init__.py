"""2D skeletal depiction: layout, SVG, rasterization, and augmentations."""

from .layout import Layout2D, layout_2d
from .raster import RasterImage, rasterize, save_png, write_png
from .svg import DEFAULT_STYLE, Style, render_svg
from .transforms import (
    TRANSFORM_KINDS,
    Transform,
    apply_transform,
    default_transform_pool,
)

__all__ = [
    "Layout2D",
    "layout_2d",
    "render_svg",
    "Style",
    "DEFAULT_STYLE",
    "RasterImage",
    "rasterize",
    "write_png",
    "save_png",
    "Transform",
    "apply_transform",
    "default_transform_pool",
    "TRANSFORM_KINDS",
]


def depict_png(graph, width: int = 384, height: int = 384) -> bytes:
    """Layout, render, and rasterize a molecule in one call."""
    layout = layout_2d(graph)
    svg = render_svg(graph, layout)
    return write_png(rasterize(svg, width, height))
