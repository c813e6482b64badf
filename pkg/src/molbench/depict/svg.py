"""Skeletal SVG rendering (bond-line convention).

Carbons go unlabeled, heteroatoms show element + hydrogen count + charge,
double and triple bonds draw as parallel strokes. Output is byte-identical
for identical inputs: coordinates use fixed two-decimal formatting and
elements are emitted in a fixed order (background, bonds, labels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..chem.graph import BOND_DOUBLE, BOND_TRIPLE, MolecularGraph
from .layout import Layout2D


@dataclass(frozen=True)
class Style:
    width: int = 384
    height: int = 384
    margin: float = 30.0
    max_scale: float = 55.0  # pixels per bond unit, upper bound
    stroke_width: float = 2.0
    font_size: float = 16.0
    double_gap: float = 0.10  # parallel-stroke offset in bond units
    label_gap: float = 0.30   # bond shortening near a labeled atom


DEFAULT_STYLE = Style()


def atom_label(graph: MolecularGraph, idx: int) -> str:
    """Label text, empty for plain carbons with bonds (bond-line rule)."""
    atom = graph.atoms[idx]
    plain_carbon = (atom.element == "C" and atom.formal_charge == 0
                    and atom.isotope is None)
    if plain_carbon and graph.degree(idx) > 0:
        return ""
    parts = []
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(atom.element)
    h = graph.total_h(idx)
    if h == 1:
        parts.append("H")
    elif h > 1:
        parts.append(f"H{h}")
    charge = atom.formal_charge
    if charge == 1:
        parts.append("+")
    elif charge == -1:
        parts.append("-")
    elif charge > 1:
        parts.append(f"+{charge}")
    elif charge < -1:
        parts.append(f"-{-charge}")
    return "".join(parts)


def render_svg(graph: MolecularGraph, layout: Layout2D,
               style: Style = DEFAULT_STYLE) -> bytes:
    if len(layout.coords) < len(graph.atoms):
        raise ValueError("layout does not cover all heavy atoms")
    xs = [p[0] for p in layout.coords]
    ys = [p[1] for p in layout.coords]
    span_x = max(xs) - min(xs) if xs else 0.0
    span_y = max(ys) - min(ys) if ys else 0.0
    usable_w = style.width - 2.0 * style.margin
    usable_h = style.height - 2.0 * style.margin
    scale = style.max_scale
    if span_x > 0:
        scale = min(scale, usable_w / span_x)
    if span_y > 0:
        scale = min(scale, usable_h / span_y)
    offset_x = (style.width - span_x * scale) / 2.0 - (min(xs) if xs else 0.0) * scale
    offset_y = (style.height - span_y * scale) / 2.0 - (min(ys) if ys else 0.0) * scale

    def to_px(point):
        # SVG y grows downward; model y grows upward
        x, y = point
        return (x * scale + offset_x, style.height - (y * scale + offset_y))

    labels = [atom_label(graph, i) for i in range(len(graph.atoms))]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width}" '
        f'height="{style.height}" viewBox="0 0 {style.width} {style.height}">',
        f'<rect x="0" y="0" width="{style.width}" height="{style.height}" fill="#ffffff"/>',
    ]

    # Primitives are sorted by geometry before emission so byte output
    # depends only on the picture, not on atom input order.
    lines: list[str] = []
    for bond in graph.bonds:
        pa = to_px(layout.coords[bond.a])
        pb = to_px(layout.coords[bond.b])
        if (pb[0], pb[1]) < (pa[0], pa[1]):
            pa, pb = pb, pa
            end_a, end_b = bond.b, bond.a
        else:
            end_a, end_b = bond.a, bond.b
        dx, dy = pb[0] - pa[0], pb[1] - pa[1]
        length = math.hypot(dx, dy)
        if length < 1e-9:
            continue
        ux, uy = dx / length, dy / length
        gap = style.label_gap * scale
        if labels[end_a]:
            pa = (pa[0] + ux * gap, pa[1] + uy * gap)
        if labels[end_b]:
            pb = (pb[0] - ux * gap, pb[1] - uy * gap)
        strokes = 1
        if bond.order == BOND_DOUBLE:
            strokes = 2
        elif bond.order == BOND_TRIPLE:
            strokes = 3
        px, py = -uy, ux  # unit perpendicular
        offsets = {1: (0.0,), 2: (-0.5, 0.5), 3: (-1.0, 0.0, 1.0)}[strokes]
        for k in offsets:
            shift = k * style.double_gap * scale
            lines.append(
                '<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" '
                'stroke="#000000" stroke-width="{:.2f}"/>'.format(
                    pa[0] + px * shift, pa[1] + py * shift,
                    pb[0] + px * shift, pb[1] + py * shift,
                    style.stroke_width,
                )
            )
    out.extend(sorted(lines))

    texts: list[str] = []
    for idx, label in enumerate(labels):
        if not label:
            continue
        x, y = to_px(layout.coords[idx])
        texts.append(
            '<text x="{:.2f}" y="{:.2f}" font-size="{:.2f}" '
            'text-anchor="middle" fill="#000000">{}</text>'.format(
                x, y, style.font_size, label)
        )
    out.extend(sorted(texts))

    out.append("</svg>")
    return "\n".join(out).encode()
