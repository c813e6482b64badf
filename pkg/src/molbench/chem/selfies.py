"""SELFIES-style codec with valence-enforcing derivation rules.

Decoding is total over known tokens: bond requests are clamped to the
remaining capacity of both endpoints, over-long ring/branch payloads are
truncated by end-of-stream, and saturated attachment points end the chain.
Structural errors are therefore impossible; only unknown tokens raise.

The token table (index alphabet and capacity caps) is a versioned data file,
``data/selfies_tokens_v1.txt``; fixtures depend on it byte-for-byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterator, Optional

from ..errors import EmptyDecode, UnknownToken, UnsupportedFeature
from .elements import AROMATIC_SYMBOLS, ORGANIC_SUBSET, PERIODIC_TABLE, implicit_hydrogens
from .graph import BOND_AROMATIC, BOND_ORDER_SUM, Atom, Bond, MolecularGraph

_ATOM_TOKEN_RE = re.compile(
    r"""\[
        (?P<bond>[=\#]?)
        (?P<isotope>\d+)?
        (?P<symbol>se|as|[A-Z][a-z]?|[bcnops])
        (?P<h>H\d*)?
        (?P<charge>[+-]\d+|[+-])?
    \]$""",
    re.VERBOSE,
)

_STRUCT_RE = re.compile(r"\[(?P<bond>[=\#]?)(?P<kind>Branch|Ring)(?P<level>[123])\]$")

_BOND_ORDER = {"": 1, "=": 2, "#": 3}
_ORDER_TO_PREFIX = {1: "", 2: "=", 3: "#"}

_DEFAULT_CAP = 8


def _load_table() -> tuple[list[str], dict[str, int]]:
    alphabet: list[str] = []
    caps: dict[str, int] = {}
    text = resources.files("molbench.chem").joinpath("data/selfies_tokens_v1.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        kind, *rest = line.split()
        if kind == "index":
            alphabet.append(rest[1])
        elif kind == "cap":
            caps[rest[0]] = int(rest[1])
    return alphabet, caps


_INDEX_ALPHABET, _CAPS = _load_table()
_INDEX_OF = {tok: i for i, tok in enumerate(_INDEX_ALPHABET)}
_BASE = len(_INDEX_ALPHABET)


def _capacity(element: str, charge: int) -> int:
    if charge:
        key = f"{element}{charge:+d}"
        if key in _CAPS:
            return _CAPS[key]
        base = _CAPS.get(element, _DEFAULT_CAP)
        return max(1, min(8, base + charge if charge > 0 else base - abs(charge)))
    return _CAPS.get(element, _DEFAULT_CAP)


def tokenize(text: str) -> list[str]:
    """Split a SELFIES string into bracket tokens and '.' separators."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == ".":
            tokens.append(".")
            i += 1
        elif ch == "[":
            end = text.find("]", i)
            if end < 0:
                raise UnknownToken(f"unterminated token at position {i}")
            tokens.append(text[i : end + 1])
            i = end + 1
        else:
            raise UnknownToken(f"unexpected character {text[i]!r} at position {i}")
    return tokens


@dataclass
class _Derived:
    element: str
    aromatic: bool
    charge: int
    isotope: Optional[int]
    explicit_h: Optional[int]
    capacity: int  # remaining bondable capacity
    bonds: list[tuple[int, int]] = field(default_factory=list)  # (other, order)


class _TokenStream:
    """Yields tokens; exhausted streams yield '' forever (v1 semantics)."""

    def __init__(self, tokens: list[str]):
        self._iter = iter(tokens)

    def next(self) -> str:
        for tok in self._iter:
            if tok != "[nop]":
                return tok
        return ""


@dataclass
class _AtomSpec:
    element: str
    aromatic: bool
    charge: int
    isotope: Optional[int]
    explicit_h: Optional[int]
    bond_request: int


def _parse_atom_token(token: str) -> Optional[_AtomSpec]:
    match = _ATOM_TOKEN_RE.match(token)
    if not match:
        return None
    symbol = match.group("symbol")
    aromatic = symbol.islower()
    if aromatic and symbol not in AROMATIC_SYMBOLS:
        return None
    element = symbol.capitalize() if aromatic else symbol
    if element not in PERIODIC_TABLE:
        return None
    h: Optional[int]
    if match.group("h"):
        digits = match.group("h")[1:]
        h = int(digits) if digits else 1
    else:
        h = None
    charge = 0
    raw = match.group("charge")
    if raw:
        charge = int(raw) if len(raw) > 1 else (1 if raw == "+" else -1)
    isotope = int(match.group("isotope")) if match.group("isotope") else None
    plain = h is None and charge == 0 and isotope is None and element in ORGANIC_SUBSET
    return _AtomSpec(
        element,
        aromatic,
        charge,
        isotope,
        None if plain else (h or 0),
        _BOND_ORDER[match.group("bond")],
    )


def decode_selfies(text: str) -> MolecularGraph:
    """Derive a valence-valid graph from a SELFIES string.

    Raises UnknownToken for tokens outside the table and EmptyDecode when no
    atoms are produced; never raises for structural reasons.
    """
    derived: list[_Derived] = []
    rings: list[tuple[int, int, int]] = []
    for fragment in text.split("."):
        tokens = tokenize(fragment)
        _derive(_TokenStream(tokens), 0, -1, derived, rings)
    _form_rings(derived, rings)
    if not derived:
        raise EmptyDecode("decoding produced no atoms")
    return _to_graph(derived)


def _derive(stream: _TokenStream, state: int, prev: int,
            derived: list[_Derived], rings: list[tuple[int, int, int]]) -> None:
    """The derivation state machine; ``state`` is the capacity left on prev.

    Branch payloads are materialized before recursing, so an exhausted outer
    stream simply truncates them; saturated attachment points (state -1) end
    the chain with the remaining symbols ignored.
    """
    take = stream.next
    token = take()
    while token and state >= 0:
        struct = _STRUCT_RE.match(token)
        if struct and struct.group("kind") == "Branch":
            level = int(struct.group("level"))
            branch_order = _BOND_ORDER[struct.group("bond")]
            if state <= 1:
                pass  # no capacity to branch: symbol ignored, payload stays
            else:
                n = _read_index(take, level)
                payload = [tok for tok in (take() for _ in range(n + 1)) if tok]
                init = min(state - 1, branch_order)
                _derive(_TokenStream(payload), init, prev, derived, rings)
                state -= init
        elif struct:
            level = int(struct.group("level"))
            ring_order = _BOND_ORDER[struct.group("bond")]
            if state == 0 or prev < 0:
                pass
            else:
                n = _read_index(take, level)
                partner = max(0, prev - (n + 1))
                rings.append((partner, prev, ring_order))
        else:
            spec = _parse_atom_token(token)
            if spec is None:
                raise UnknownToken(f"unknown token {token!r}")
            cap = _capacity(spec.element, spec.charge)
            h = spec.explicit_h
            if h is not None:
                h = min(h, cap)
            cap_after_h = cap - (h or 0)
            if state == 0:
                derived.append(_Derived(spec.element, spec.aromatic, spec.charge,
                                        spec.isotope, h, cap_after_h))
                prev = len(derived) - 1
                state = cap_after_h
            else:
                order = min(spec.bond_request, state, cap_after_h)
                if order == 0:
                    state = -1  # attachment saturated: chain ends here
                else:
                    derived.append(_Derived(spec.element, spec.aromatic, spec.charge,
                                            spec.isotope, h, cap_after_h - order))
                    idx = len(derived) - 1
                    derived[idx].bonds.append((prev, order))
                    derived[prev].bonds.append((idx, order))
                    derived[prev].capacity -= order
                    prev = idx
                    state = cap_after_h - order
        token = take()


def _read_index(take, level: int) -> int:
    value = 0
    for _ in range(level):
        tok = take()
        value = value * _BASE + _INDEX_OF.get(tok, 0)
    return value


def _form_rings(derived: list[_Derived], rings: list[tuple[int, int, int]]) -> None:
    formed: dict[tuple[int, int], int] = {}
    existing = {}
    for idx, atom in enumerate(derived):
        for other, order in atom.bonds:
            existing[(min(idx, other), max(idx, other))] = order
    for left, right, order in rings:
        if left == right:
            continue
        key = (min(left, right), max(left, right))
        la, ra = derived[left], derived[right]
        if la.capacity <= 0 or ra.capacity <= 0:
            continue
        order = min(order, la.capacity, ra.capacity)
        if key in existing:
            # ring over an existing bond upgrades its order, capped at triple
            bump = min(order, 3 - existing[key])
            if bump <= 0:
                continue
            existing[key] += bump
            for atom, other in ((la, right), (ra, left)):
                atom.bonds = [
                    (o, existing[key] if o == other else b) for o, b in atom.bonds
                ]
                atom.capacity -= bump
            continue
        if key in formed:
            bump = min(order, 3 - formed[key])
            if bump <= 0:
                continue
            formed[key] += bump
            la.capacity -= bump
            ra.capacity -= bump
            continue
        formed[key] = order
        la.capacity -= order
        ra.capacity -= order
    for (left, right), order in formed.items():
        if order == 1 and derived[left].aromatic and derived[right].aromatic:
            order = BOND_AROMATIC
        derived[left].bonds.append((right, order))
        derived[right].bonds.append((left, order))


def _to_graph(derived: list[_Derived]) -> MolecularGraph:
    bonds: list[Bond] = []
    seen: set[tuple[int, int]] = set()
    for idx, atom in enumerate(derived):
        for other, order in atom.bonds:
            key = (min(idx, other), max(idx, other))
            if key in seen:
                continue
            seen.add(key)
            if order == 1 and derived[key[0]].aromatic and derived[key[1]].aromatic:
                order = BOND_AROMATIC
            bonds.append(Bond(key[0], key[1], order))

    order_sum = [0] * len(derived)
    for bond in bonds:
        order_sum[bond.a] += BOND_ORDER_SUM[bond.order]
        order_sum[bond.b] += BOND_ORDER_SUM[bond.order]

    implicit = []
    for idx, atom in enumerate(derived):
        if atom.explicit_h is not None:
            implicit.append(0)
        else:
            h = implicit_hydrogens(atom.element, order_sum[idx], atom.aromatic)
            implicit.append(max(h, 0))

    probe = MolecularGraph(
        [Atom(d.element, d.charge, d.aromatic, d.explicit_h, d.isotope) for d in derived],
        bonds,
        implicit,
    )
    in_ring = {i for key in probe.ring_bonds() for i in key}
    atoms = [
        Atom(d.element, d.charge, d.aromatic, d.explicit_h, d.isotope, idx in in_ring)
        for idx, d in enumerate(derived)
    ]
    return MolecularGraph(atoms, bonds, implicit)


# --- encoding ---------------------------------------------------------------


def encode_selfies(graph: MolecularGraph) -> str:
    """Encode a graph; decode_selfies(encode_selfies(g)) is isomorphic to g."""
    if len(graph.atoms) == 0:
        raise UnsupportedFeature("cannot encode an empty graph")
    for idx, atom in enumerate(graph.atoms):
        cap = _capacity(atom.element, atom.formal_charge)
        used = graph.bond_order_sum(idx)
        if atom.explicit_h is not None:
            used += atom.explicit_h
        if used > cap:
            raise UnsupportedFeature(
                f"atom {idx} ({atom.element}) exceeds SELFIES capacity {cap}"
            )
    parts = []
    for fragment in graph.fragments():
        parts.append("".join(_encode_fragment(graph, fragment)))
    return ".".join(parts)


def _encode_fragment(graph: MolecularGraph, fragment: list[int]) -> list[str]:
    start = fragment[0]
    position: dict[int, int] = {}
    ring_emitted: set[tuple[int, int]] = set()

    tree: dict[int, list[int]] = {i: [] for i in fragment}
    parent: dict[int, int] = {start: -1}
    visited = {start}
    walk: list[tuple[int, Iterator[int]]] = [(start, iter(graph.neighbors(start)))]
    while walk:
        node, neighbors = walk[-1]
        for nbr in neighbors:
            if nbr in visited:
                continue
            visited.add(nbr)
            parent[nbr] = node
            tree[node].append(nbr)
            walk.append((nbr, iter(graph.neighbors(nbr))))
            break
        else:
            walk.pop()

    def closures_at(node: int) -> list[tuple[int, int]]:
        out = []
        for nbr in graph.neighbors(node):
            if parent.get(nbr) == node or parent.get(node) == nbr:
                continue
            key = (min(node, nbr), max(node, nbr))
            if key not in ring_emitted and nbr in position:
                out.append((nbr, graph.bond_between(node, nbr).order))
                ring_emitted.add(key)
        return out

    def emit_subtree(node: int, incoming_order: Optional[int]) -> list[str]:
        tokens = [_atom_token(graph, node, incoming_order)]
        position[node] = len(position)
        for partner, order in closures_at(node):
            distance = position[node] - position[partner] - 1
            tokens.extend(_ring_tokens(order, distance))
        kids = tree[node]
        for child in kids[:-1]:
            child_order = _effective_order(graph, node, child)
            payload = emit_subtree(child, child_order)
            tokens.extend(_branch_tokens(child_order, payload))
        if kids:
            child = kids[-1]
            tokens.extend(emit_subtree(child, _effective_order(graph, node, child)))
        return tokens

    return emit_subtree(start, None)


def _effective_order(graph: MolecularGraph, a: int, b: int) -> int:
    order = graph.bond_between(a, b).order
    return 1 if order == BOND_AROMATIC else order


def _atom_token(graph: MolecularGraph, idx: int, incoming_order: Optional[int]) -> str:
    atom = graph.atoms[idx]
    prefix = _ORDER_TO_PREFIX[incoming_order] if incoming_order else ""
    symbol = atom.element.lower() if atom.aromatic else atom.element

    needs_h = False
    if atom.explicit_h is not None:
        would_be = implicit_hydrogens(atom.element, graph.bond_order_sum(idx), atom.aromatic)
        needs_h = atom.explicit_h != would_be
    plain = (not needs_h and atom.formal_charge == 0 and atom.isotope is None
             and atom.element in ORGANIC_SUBSET)
    if plain:
        return f"[{prefix}{symbol}]"
    parts = [f"[{prefix}"]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol)
    h = graph.total_h(idx)
    if h:
        parts.append(f"H{h}")
    if atom.formal_charge:
        parts.append(f"{atom.formal_charge:+d}")
    parts.append("]")
    return "".join(parts)


def _index_tokens(value: int) -> list[str]:
    if value == 0:
        return [_INDEX_ALPHABET[0]]
    digits = []
    while value:
        digits.append(_INDEX_ALPHABET[value % _BASE])
        value //= _BASE
    return digits[::-1]


def _level_for(value: int) -> int:
    for level in (1, 2, 3):
        if value < _BASE**level:
            return level
    raise UnsupportedFeature(f"payload value {value} exceeds 3 index symbols")


def _ring_tokens(order: int, distance: int) -> list[str]:
    order = 1 if order == BOND_AROMATIC else order
    level = _level_for(distance)
    digits = _index_tokens(distance)
    digits = [_INDEX_ALPHABET[0]] * (level - len(digits)) + digits
    return [f"[{_ORDER_TO_PREFIX[order]}Ring{level}]"] + digits


def _branch_tokens(first_order: int, payload: list[str]) -> list[str]:
    n = len(payload) - 1
    level = _level_for(n)
    digits = _index_tokens(n)
    digits = [_INDEX_ALPHABET[0]] * (level - len(digits)) + digits
    return [f"[{_ORDER_TO_PREFIX[first_order]}Branch{level}]"] + digits + payload
