"""Deterministic 2D coordinates for skeletal depiction.

Rings are placed as regular polygons (fused rings reflected over shared
edges), acyclic chains zigzag at 120 degrees (segments alternate +-60 degrees
from horizontal), and a fixed-iteration relaxation separates overlapping
non-bonded atoms. Atom processing order is keyed to canonical labels, so the
result depends only on the graph, not on input atom order quirks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..chem.canon import canonical_labels
from ..chem.graph import MolecularGraph
from ..errors import LayoutFailure

BOND_LENGTH = 1.0
_CHAIN_ANGLE = math.radians(60.0)
_RELAX_ITERATIONS = 40
_MIN_SEPARATION = 0.3


@dataclass(frozen=True)
class Layout2D:
    coords: tuple[tuple[float, float], ...]
    diagnostics: tuple[str, ...] = field(default=())


def layout_2d(graph: MolecularGraph) -> Layout2D:
    """Coordinates for every heavy atom, in bond-length units.

    All geometry is computed in canonical index space and mapped back, so
    isomorphic graphs receive identical pictures regardless of atom input
    order.
    """
    if len(graph.atoms) == 0:
        return Layout2D(())
    to_canonical = canonical_labels(graph)  # discrete: a permutation
    work = graph.relabel(to_canonical)
    labels = list(range(len(work.atoms)))
    diagnostics: list[str] = []
    fragments = sorted(work.fragments(), key=lambda f: (-len(f), f[0]))
    if len(fragments) > 1:
        diagnostics.append(
            f"disconnected input: {len(fragments)} fragments laid out side by side")

    coords: dict[int, tuple[float, float]] = {}
    x_offset = 0.0
    for fragment in fragments:
        frag_coords = _layout_fragment(work, labels, fragment)
        xs = [p[0] for p in frag_coords.values()]
        ys = [p[1] for p in frag_coords.values()]
        shift = x_offset - min(xs)
        for idx, (x, y) in frag_coords.items():
            coords[idx] = (x + shift, y - min(ys))
        x_offset += (max(xs) - min(xs)) + 2.0 * BOND_LENGTH

    positions = _relax(work, [coords[i] for i in range(len(work.atoms))])
    for x, y in positions:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise LayoutFailure("relaxation produced non-finite coordinates")
    return Layout2D(
        tuple(positions[to_canonical[i]] for i in range(len(graph.atoms))),
        tuple(diagnostics),
    )


def _layout_fragment(graph, labels, fragment) -> dict[int, tuple[float, float]]:
    rings = _perceive_rings(graph, fragment)
    ring_of_atom: dict[int, list[int]] = {}
    for ring_idx, ring in enumerate(rings):
        for atom in ring:
            ring_of_atom.setdefault(atom, []).append(ring_idx)

    coords: dict[int, tuple[float, float]] = {}
    placed_rings: set[int] = set()
    start = min(fragment, key=lambda i: labels[i])

    if start in ring_of_atom:
        first_ring = min(ring_of_atom[start])
        _place_polygon(rings[first_ring], coords, anchor=None)
        placed_rings.add(first_ring)
    else:
        coords[start] = (0.0, 0.0)

    # Grow outward: repeatedly take the placed atom with an unplaced neighbor,
    # lowest canonical label first.
    directions: dict[int, float] = {}
    while True:
        frontier = sorted(
            (labels[i], i) for i in coords
            if any(nbr not in coords for nbr in graph.neighbors(i))
        )
        if not frontier:
            break
        _, atom = frontier[0]
        pending = sorted((labels[n], n) for n in graph.neighbors(atom) if n not in coords)
        _, nxt = pending[0]

        shared_ring = next(
            (r for r in ring_of_atom.get(nxt, []) if r not in placed_rings), None)
        if shared_ring is not None:
            ring = rings[shared_ring]
            placed_in_ring = [a for a in ring if a in coords]
            if len(placed_in_ring) >= 2:
                _complete_polygon(ring, coords)  # fused: shares an edge
            elif len(placed_in_ring) == 1:
                _spiro_polygon(graph, ring, coords, placed_in_ring[0], directions)
            else:
                _attach_ring(graph, ring, coords, atom, directions)
            placed_rings.add(shared_ring)
            # fill any fused neighbors that now share an edge with placed atoms
            _place_fused(rings, ring_of_atom, placed_rings, coords)
            continue
        _place_chain_atom(graph, coords, directions, atom, nxt)
    return coords


def _perceive_rings(graph, fragment) -> list[list[int]]:
    """Small rings covering every ring bond (shortest-cycle greedy cover)."""
    ring_bond_keys = graph.ring_bonds()
    in_fragment = set(fragment)
    keys = sorted(k for k in ring_bond_keys if k[0] in in_fragment)
    rings: list[list[int]] = []
    covered: set[tuple[int, int]] = set()
    for key in keys:
        if key in covered:
            continue
        cycle = _shortest_cycle(graph, key, ring_bond_keys)
        if cycle is None:
            continue
        rings.append(cycle)
        for i in range(len(cycle)):
            a, b = cycle[i], cycle[(i + 1) % len(cycle)]
            covered.add((a, b) if a < b else (b, a))
    return rings


def _shortest_cycle(graph, bond_key, ring_bond_keys):
    """Shortest path between bond endpoints avoiding the bond itself."""
    start, goal = bond_key
    frontier = [[start]]
    seen = {start}
    while frontier:
        new_frontier = []
        for path in frontier:
            tip = path[-1]
            for nbr in graph.neighbors(tip):
                key = (tip, nbr) if tip < nbr else (nbr, tip)
                if key == bond_key or key not in ring_bond_keys:
                    continue
                if nbr == goal:
                    return path + [nbr]
                if nbr not in seen:
                    seen.add(nbr)
                    new_frontier.append(path + [nbr])
        frontier = new_frontier
    return None


def _place_polygon(ring, coords, anchor):
    n = len(ring)
    radius = BOND_LENGTH / (2.0 * math.sin(math.pi / n))
    for pos, atom in enumerate(ring):
        angle = 2.0 * math.pi * pos / n + math.pi / 2.0
        coords[atom] = (radius * math.cos(angle), radius * math.sin(angle))


def _attach_ring(graph, ring, coords, anchor, directions):
    """Place ``ring`` so its entry atom bonds to the placed ``anchor``."""
    n = len(ring)
    entries = [a for a in ring if a in graph.neighbors(anchor)]
    entry = entries[0] if entries else ring[0]
    order = ring[ring.index(entry):] + ring[:ring.index(entry)]
    direction = _free_direction(graph, coords, directions, anchor)
    ax, ay = coords[anchor]
    ex = ax + BOND_LENGTH * math.cos(direction)
    ey = ay + BOND_LENGTH * math.sin(direction)
    radius = BOND_LENGTH / (2.0 * math.sin(math.pi / n))
    cx = ex + radius * math.cos(direction)
    cy = ey + radius * math.sin(direction)
    base = math.atan2(ey - cy, ex - cx)
    for pos, atom in enumerate(order):
        angle = base + 2.0 * math.pi * pos / n
        if atom not in coords:
            coords[atom] = (cx + radius * math.cos(angle), cy + radius * math.sin(angle))


def _place_fused(rings, ring_of_atom, placed_rings, coords):
    """Construct polygons for rings sharing an edge with placed geometry."""
    progress = True
    while progress:
        progress = False
        for ring_idx, ring in enumerate(rings):
            if ring_idx in placed_rings:
                continue
            placed = [a for a in ring if a in coords]
            if len(placed) < 2:
                continue
            _complete_polygon(ring, coords)
            placed_rings.add(ring_idx)
            progress = True


def _complete_polygon(ring, coords):
    """Fill missing ring atoms, folding away from already-placed geometry."""
    n = len(ring)
    # rotate so a placed adjacent pair leads
    for shift in range(n):
        order = ring[shift:] + ring[:shift]
        if order[0] in coords and order[1] in coords:
            break
    else:
        _place_polygon(ring, coords, None)
        return
    bx, by = coords[order[1]]
    interior = math.pi * (n - 2) / n
    existing = [p for a, p in coords.items() if a not in ring]
    candidates = []
    for sign in (1.0, -1.0):
        trial: dict[int, tuple[float, float]] = {}
        ax, ay = coords[order[0]]
        x, y = bx, by
        heading = math.atan2(by - ay, bx - ax)
        closure_error = 0.0
        for atom in order[2:] + [order[0]]:
            heading += sign * (math.pi - interior)
            x += BOND_LENGTH * math.cos(heading)
            y += BOND_LENGTH * math.sin(heading)
            if atom in coords:
                closure_error = max(closure_error, math.dist(coords[atom], (x, y)))
            elif atom in trial:
                closure_error = max(closure_error, math.dist(trial[atom], (x, y)))
            else:
                trial[atom] = (x, y)
        clearance = min(
            (math.dist(p, q) for p in trial.values() for q in existing),
            default=10.0,
        )
        candidates.append((closure_error, -clearance, -sign, trial))
    candidates.sort(key=lambda c: (c[0] > 0.3, c[1], c[2]))
    coords.update(candidates[0][3])


def _spiro_polygon(graph, ring, coords, shared_atom, directions):
    """Polygon touching placed geometry at exactly one shared atom."""
    n = len(ring)
    radius = BOND_LENGTH / (2.0 * math.sin(math.pi / n))
    direction = _free_direction(graph, coords, directions, shared_atom)
    ax, ay = coords[shared_atom]
    cx = ax + radius * math.cos(direction)
    cy = ay + radius * math.sin(direction)
    order = ring[ring.index(shared_atom):] + ring[:ring.index(shared_atom)]
    base = math.atan2(ay - cy, ax - cx)
    for pos, atom in enumerate(order):
        if atom in coords:
            continue
        angle = base + 2.0 * math.pi * pos / n
        coords[atom] = (cx + radius * math.cos(angle), cy + radius * math.sin(angle))


def _free_direction(graph, coords, directions, atom) -> float:
    """Direction of the widest angular gap around ``atom``."""
    ax, ay = coords[atom]
    used = []
    for nbr in graph.neighbors(atom):
        if nbr in coords:
            nx, ny = coords[nbr]
            if (nx, ny) != (ax, ay):
                used.append(math.atan2(ny - ay, nx - ax))
    if not used:
        return directions.get(atom, _CHAIN_ANGLE)
    if len(used) == 1:
        # used[0] points back along the bond; the travel direction is opposite
        return _zigzag_next(used[0] + math.pi)
    used.sort()
    gaps = []
    for i, angle in enumerate(used):
        nxt = used[(i + 1) % len(used)] + (2.0 * math.pi if i + 1 == len(used) else 0.0)
        gaps.append((nxt - angle, angle + (nxt - angle) / 2.0))
    width, middle = max(gaps)
    return middle


def _zigzag_next(travel: float) -> float:
    """Next chain direction: mirror the travel heading across horizontal.

    Headings whose mirror would retrace or continue dead straight (vertical
    or horizontal travel) kink by 120 degrees instead.
    """
    outgoing = -travel
    turn = math.remainder(outgoing - travel, 2.0 * math.pi)
    if abs(turn) < math.radians(20) or abs(turn) > math.radians(160):
        outgoing = travel + 2.0 * math.pi / 3.0
    return outgoing


def _place_chain_atom(graph, coords, directions, atom, nxt):
    ax, ay = coords[atom]
    placed_neighbors = [n for n in graph.neighbors(atom) if n in coords]
    if not placed_neighbors:
        heading = _CHAIN_ANGLE
    else:
        heading = _free_direction(graph, coords, directions, atom)
    coords[nxt] = (ax + BOND_LENGTH * math.cos(heading), ay + BOND_LENGTH * math.sin(heading))
    directions[nxt] = heading


def _relax(graph, positions):
    """Fixed-iteration separation of non-bonded near-overlaps.

    Push-apart steps run in sorted pair order, then bonds are re-tightened
    toward unit length; everything is sequential and deterministic.
    """
    n = len(positions)
    if n <= 2:
        return positions
    pts = [list(p) for p in positions]
    bonded = {b.key for b in graph.bonds}
    for _ in range(_RELAX_ITERATIONS):
        moved = False
        for i in range(n):
            for j in range(i + 1, n):
                if (i, j) in bonded:
                    continue
                dx = pts[j][0] - pts[i][0]
                dy = pts[j][1] - pts[i][1]
                dist = math.hypot(dx, dy)
                if dist >= _MIN_SEPARATION * 2:
                    continue
                if dist < 1e-9:
                    angle = 0.7 * (i + 1) + 1.3 * j
                    dx, dy, dist = math.cos(angle), math.sin(angle), 1.0
                push = (_MIN_SEPARATION * 2 - dist) / 2.0 * 0.5
                ux, uy = dx / dist, dy / dist
                pts[i][0] -= ux * push
                pts[i][1] -= uy * push
                pts[j][0] += ux * push
                pts[j][1] += uy * push
                moved = True
        for a, b in sorted(bonded):
            dx = pts[b][0] - pts[a][0]
            dy = pts[b][1] - pts[a][1]
            dist = math.hypot(dx, dy)
            if dist < 1e-9 or abs(dist - BOND_LENGTH) < 0.25:
                continue
            correction = (dist - BOND_LENGTH) / 2.0 * 0.5
            ux, uy = dx / dist, dy / dist
            pts[a][0] += ux * correction
            pts[a][1] += uy * correction
            pts[b][0] -= ux * correction
            pts[b][1] -= uy * correction
            moved = True
        if not moved:
            break
    return [(x, y) for x, y in pts]
