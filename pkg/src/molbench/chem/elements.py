"""Element symbols and the valence model used for implicit-hydrogen counting.

The valence model is deliberately small: the organic subset carries allowed
valence lists for implicit-H computation, every other recognized element is
accepted in bracket atoms with hydrogens given explicitly.
"""

from __future__ import annotations

# Allowed valences for implicit-H computation (smallest first).
DEFAULT_VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}

# Elements writable without brackets.
ORGANIC_SUBSET = frozenset(DEFAULT_VALENCES)

# Lowercase symbols accepted as aromatic atoms.
AROMATIC_SYMBOLS = frozenset({"b", "c", "n", "o", "p", "s", "se", "as"})

# Aromatic atoms that donate a lone pair to the pi system rather than an
# electron of a double bond; they get no extra pi valence allowance.
_PI_LONE_PAIR = frozenset({"O", "S", "Se"})

# Full periodic table, for bracket-atom validation.
PERIODIC_TABLE = frozenset(
    """H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co
    Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te
    I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re Os Ir
    Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm Md No
    Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og""".split()
)


def allowed_valences(element: str) -> tuple[int, ...]:
    """Allowed valence list, empty for elements outside the model."""
    return DEFAULT_VALENCES.get(element, ())


def implicit_hydrogens(element: str, bond_order_sum: int, aromatic: bool) -> int:
    """Implicit H count for a bare (non-bracket) atom, or -1 on violation.

    ``bond_order_sum`` counts aromatic bonds as 1 each. Aromatic atoms get one
    extra pi bond added to the sum when the element's smallest valence can
    accommodate it and the element is not a lone-pair pi donor; this yields the
    conventional counts (benzene C: 1H, pyridine N: 0H, furan O: 0H,
    thiophene S: 0H, fused aromatic C: 0H).
    """
    valences = allowed_valences(element)
    if not valences:
        return -1
    total = bond_order_sum
    if aromatic and element not in _PI_LONE_PAIR and valences[0] >= total + 1:
        total += 1
    for v in valences:
        if v >= total:
            return v - total
    return -1
