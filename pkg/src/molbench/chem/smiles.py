"""SMILES reader for the organic subset plus bracket atoms.

Supported: organic-subset atoms, bracket atoms with isotope/H-count/charge,
aromatic lowercase notation, ring closures (digits and %nn), branches, dots,
and bond symbols - = # : / \\. Stereo marks (@, @@, /, \\) are parsed and kept
as inert annotations; kekulization and aromaticity perception are out of
scope (input aromatic flags are trusted).

Every parse error carries the byte offset of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..errors import (
    SmilesParseError,
    UnbalancedBranch,
    UnclosedRing,
    UnknownElement,
    ValenceViolation,
)
from .elements import AROMATIC_SYMBOLS, ORGANIC_SUBSET, PERIODIC_TABLE, implicit_hydrogens
from .graph import (
    BOND_AROMATIC,
    BOND_DOUBLE,
    BOND_ORDER_SUM,
    BOND_SINGLE,
    BOND_TRIPLE,
    Atom,
    Bond,
    MolecularGraph,
)

_BOND_CHARS = {
    "-": (BOND_SINGLE, None),
    "=": (BOND_DOUBLE, None),
    "#": (BOND_TRIPLE, None),
    ":": (BOND_AROMATIC, None),
    "/": (BOND_SINGLE, "/"),
    "\\": (BOND_SINGLE, "\\"),
}

_BRACKET_RE = re.compile(
    r"""\[
        (?P<isotope>\d+)?
        (?P<symbol>[A-Z][a-z]?|b|c|n|o|p|s|se|as)
        (?P<chiral>@@?)?
        (?P<hcount>H\d*)?
        (?P<charge>\+\+|--|[+-]\d*)?
        (?::\d+)?
    \]""",
    re.VERBOSE,
)

_TWO_LETTER_ORGANIC = ("Cl", "Br")


@dataclass
class _AtomDraft:
    element: str
    aromatic: bool
    offset: int
    charge: int = 0
    explicit_h: Optional[int] = None
    isotope: Optional[int] = None
    chirality: Optional[str] = None


def parse_smiles(text: str) -> MolecularGraph:
    """Parse SMILES into a molecular graph with implicit hydrogens resolved."""
    if not text or not text.strip():
        raise UnknownElement("empty SMILES string", 0)
    source = text
    text = text.strip()

    atoms: list[_AtomDraft] = []
    bonds: list[tuple[int, int, int, Optional[str]]] = []
    bond_keys: set[tuple[int, int]] = set()

    prev: Optional[int] = None
    pending: Optional[tuple[int, Optional[str], int]] = None  # (order, direction, offset)
    branch_stack: list[tuple[Optional[int], int]] = []
    open_rings: dict[int, tuple[int, Optional[int], Optional[str], int]] = {}

    def add_bond(a: int, b: int, order: Optional[int], direction: Optional[str], offset: int):
        if a == b:
            raise UnclosedRing("ring bond to the same atom", offset)
        key = (a, b) if a < b else (b, a)
        if key in bond_keys:
            raise UnclosedRing("duplicate bond between one atom pair", offset)
        if order is None:
            order = BOND_AROMATIC if atoms[a].aromatic and atoms[b].aromatic else BOND_SINGLE
        if order == BOND_AROMATIC and not (atoms[a].aromatic and atoms[b].aromatic):
            raise ValenceViolation("aromatic bond between non-aromatic atoms", offset)
        bond_keys.add(key)
        bonds.append((a, b, order, direction))

    def close_or_open_ring(tag: int, offset: int):
        nonlocal pending
        if prev is None:
            raise UnclosedRing("ring closure digit before any atom", offset)
        if tag in open_rings:
            other, o_order, o_dir, o_off = open_rings.pop(tag)
            order = None
            direction = o_dir
            if o_order is not None and pending is not None and o_order != pending[0]:
                raise UnclosedRing("ring closure bond order mismatch", offset)
            if o_order is not None:
                order = o_order
            if pending is not None:
                order = pending[0]
                direction = pending[1]
            add_bond(other, prev, order, direction, offset)
        else:
            open_rings[tag] = (
                prev,
                pending[0] if pending else None,
                pending[1] if pending else None,
                offset,
            )
        pending = None

    i, n = 0, len(text)
    while i < n:
        ch = text[i]

        if ch == "(":
            if prev is None:
                raise UnbalancedBranch("branch opened before any atom", i)
            if pending is not None:
                raise ValenceViolation("bond symbol before branch opening", pending[2])
            branch_stack.append((prev, i))
            i += 1
        elif ch == ")":
            if pending is not None:
                raise ValenceViolation("dangling bond symbol", pending[2])
            if not branch_stack:
                raise UnbalancedBranch("unmatched closing parenthesis", i)
            prev, _ = branch_stack.pop()
            i += 1
        elif ch == ".":
            if pending is not None:
                raise ValenceViolation("dangling bond symbol", pending[2])
            prev = None
            i += 1
        elif ch in _BOND_CHARS:
            if pending is not None:
                raise ValenceViolation("duplicate bond symbol", i)
            order, direction = _BOND_CHARS[ch]
            pending = (order, direction, i)
            i += 1
        elif ch.isdigit():
            close_or_open_ring(int(ch), i)
            i += 1
        elif ch == "%":
            two = text[i + 1 : i + 3]
            if len(two) != 2 or not two.isdigit():
                raise UnclosedRing("malformed %nn ring closure", i)
            close_or_open_ring(int(text[i + 1 : i + 3]), i)
            i += 3
        elif ch == "[":
            draft, i = _parse_bracket(text, i)
            prev = _attach(atoms, draft, prev, pending, add_bond)
            pending = None
        else:
            draft, i = _parse_bare_atom(text, i)
            prev = _attach(atoms, draft, prev, pending, add_bond)
            pending = None

    if pending is not None:
        raise ValenceViolation("dangling bond symbol", pending[2])
    if branch_stack:
        raise UnbalancedBranch("unclosed branch", branch_stack[0][1])
    if open_rings:
        first = min(open_rings.values(), key=lambda v: v[3])
        raise UnclosedRing("unclosed ring bond", first[3])

    return _finalize(atoms, bonds, source)


def _attach(atoms, draft, prev, pending, add_bond) -> int:
    atoms.append(draft)
    idx = len(atoms) - 1
    if prev is not None:
        order = pending[0] if pending else None
        direction = pending[1] if pending else None
        add_bond(prev, idx, order, direction, pending[2] if pending else draft.offset)
    elif pending is not None:
        raise ValenceViolation("bond symbol with no preceding atom", pending[2])
    return idx


def _parse_bare_atom(text: str, i: int) -> tuple[_AtomDraft, int]:
    for sym in _TWO_LETTER_ORGANIC:
        if text.startswith(sym, i):
            return _AtomDraft(sym, aromatic=False, offset=i), i + 2
    ch = text[i]
    if ch in "BCNOPSFI":
        return _AtomDraft(ch, aromatic=False, offset=i), i + 1
    if ch in "bcnops":
        return _AtomDraft(ch.upper(), aromatic=True, offset=i), i + 1
    raise UnknownElement(f"unexpected character {ch!r}", i)


def _parse_bracket(text: str, i: int) -> tuple[_AtomDraft, int]:
    match = _BRACKET_RE.match(text, i)
    if not match:
        raise UnknownElement("malformed bracket atom", i)
    symbol = match.group("symbol")
    aromatic = symbol[0].islower()
    if aromatic:
        if symbol not in AROMATIC_SYMBOLS:
            raise UnknownElement(f"unknown aromatic symbol {symbol!r}", i)
        element = symbol.capitalize()
    else:
        element = symbol
    if element not in PERIODIC_TABLE:
        raise UnknownElement(f"unknown element {element!r}", i)

    hcount = 0
    if match.group("hcount"):
        digits = match.group("hcount")[1:]
        hcount = int(digits) if digits else 1

    charge = 0
    raw_charge = match.group("charge")
    if raw_charge:
        if raw_charge in ("++", "--"):
            charge = 2 if raw_charge == "++" else -2
        else:
            sign = 1 if raw_charge[0] == "+" else -1
            charge = sign * (int(raw_charge[1:]) if len(raw_charge) > 1 else 1)

    isotope = int(match.group("isotope")) if match.group("isotope") else None
    return (
        _AtomDraft(
            element,
            aromatic=aromatic,
            offset=i,
            charge=charge,
            explicit_h=hcount,
            isotope=isotope,
            chirality=match.group("chiral"),
        ),
        match.end(),
    )


def _finalize(drafts: list[_AtomDraft], bonds, source: str) -> MolecularGraph:
    order_sum = [0] * len(drafts)
    for a, b, order, _ in bonds:
        order_sum[a] += BOND_ORDER_SUM[order]
        order_sum[b] += BOND_ORDER_SUM[order]

    implicit = []
    for idx, draft in enumerate(drafts):
        if draft.explicit_h is not None:
            implicit.append(0)  # bracket atoms: hydrogens are verbatim
            continue
        h = implicit_hydrogens(draft.element, order_sum[idx], draft.aromatic)
        if h < 0:
            raise ValenceViolation(
                f"{draft.element} with bond order sum {order_sum[idx]} "
                "exceeds allowed valence",
                draft.offset,
            )
        implicit.append(h)

    bond_objs = [Bond(a, b, order, direction) for a, b, order, direction in bonds]
    probe = MolecularGraph(
        [Atom(d.element, d.charge, d.aromatic, d.explicit_h, d.isotope, False, d.chirality)
         for d in drafts],
        bond_objs,
        implicit,
        source,
    )
    in_ring = {i for key in probe.ring_bonds() for i in key}
    atoms = [
        Atom(d.element, d.charge, d.aromatic, d.explicit_h, d.isotope, idx in in_ring,
             d.chirality)
        for idx, d in enumerate(drafts)
    ]
    return MolecularGraph(atoms, bond_objs, implicit, source)
