"""Explicit constants of the torsion and small-height counting bounds.

Everything is exact: constants are Fractions and the floors are taken on
Fractions, so boundary cases cannot be corrupted by rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import format_rational, parse_rational
from .errors import InvalidEpsilon, InvalidGenus

__all__ = [
    "BoundReport",
    "cinkir_constant",
    "count_bound",
    "count_bound_closed",
    "count_bound_general",
    "envelope",
    "epsilon_limit",
    "green_sup_assembly",
    "green_sup_constant",
    "torsion_bound_closed",
]


def _genus(g) -> int:
    if isinstance(g, bool) or int(g) != g or g < 2:
        raise InvalidGenus(f"genus must be an integer >= 2, got {g!r}")
    return int(g)


def cinkir_constant(g: int, tree: bool = False) -> Fraction:
    """Constant ``c`` with ``delta <= c * phi`` for polarized graphs of genus ``g``."""
    g = _genus(g)
    if tree:
        return Fraction(g, 2 * g - 2)
    if g == 2:
        return Fraction(27)
    if g == 3:
        return Fraction(288, 17)
    return Fraction(2 * g * (7 * g + 5), (g - 1) ** 2)


def green_sup_constant(g: int, tree: bool = False) -> Fraction:
    """Constant bounding the canonical Green function by a multiple of phi (closed forms)."""
    g = _genus(g)
    if tree:
        return Fraction(2 * g * g - 3 * g + 2, 2 * g * (2 * g - 2))
    if g == 2:
        return Fraction(15, 4)
    if g == 3:
        return Fraction(140, 51)
    return Fraction(8 * g**4 + 18 * g**2 - 13 * g - 1, 2 * g * (2 * g + 1) * (g - 1) ** 2)


def green_sup_assembly(g: int, tree: bool = False) -> Fraction:
    """The same constant assembled from :func:`cinkir_constant`."""
    g = _genus(g)
    if tree:
        return ((2 * g - 1) * cinkir_constant(g, tree=True) - 1) / (2 * g)
    return ((3 * g - 2) * cinkir_constant(g) + 16 * g * g - 10 * g - 2) / (4 * g * (2 * g + 1))


def epsilon_limit(g: int) -> Fraction:
    """Exclusive upper end of the admissible height ratio."""
    g = _genus(g)
    return Fraction(1, 4 * (g * g - 1))


def _epsilon(g: int, eps) -> Fraction:
    try:
        eps = parse_rational(eps)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidEpsilon(str(exc)) from None
    if not 0 <= eps < epsilon_limit(g):
        raise InvalidEpsilon(f"epsilon must lie in [0, {format_rational(epsilon_limit(g))}), got {format_rational(eps)}")
    return eps


def count_bound_general(g: int, eps=0, tree: bool = False, halving: bool = False) -> int:
    """``floor(4(g-1)g(2g+1)c' / (max(2, g-1)(1 - 4(g^2-1)eps))) + 1``.

    With ``halving`` the factor ``max(2, g-1)`` becomes ``2g - 2``.
    """
    g = _genus(g)
    eps = _epsilon(g, eps)
    lower = 2 * g - 2 if halving else max(2, g - 1)
    num = 4 * (g - 1) * g * (2 * g + 1) * green_sup_assembly(g, tree)
    return math.floor(num / (lower * (1 - 4 * (g * g - 1) * eps))) + 1


def count_bound_closed(g: int, eps=0, tree: bool = False) -> int:
    """Per-genus closed forms of the small-height count."""
    g = _genus(g)
    eps = _epsilon(g, eps)
    shrink = 1 - 4 * (g * g - 1) * eps
    if tree:
        if g == 2:
            return math.floor(10 / (1 - 12 * eps)) + 1
        return math.floor(Fraction(4 * g**3 - 4 * g**2 + g + 2, g - 1) / shrink) + 1
    if g == 2:
        return math.floor(75 / (1 - 12 * eps)) + 1
    if g == 3:
        return math.floor(Fraction(3920, 17) / (1 - 32 * eps)) + 1
    return math.floor(Fraction(16 * g**4 + 36 * g**2 - 26 * g - 2, (g - 1) ** 2) / shrink) + 1


def torsion_bound_closed(g: int, tree: bool = False) -> int:
    """Closed forms of the torsion-point count."""
    g = _genus(g)
    if tree:
        if g == 2:
            return 11
        return (4 * g**3 - 4 * g**2 + 2 * g + 1) // (g - 1)
    if g == 2:
        return 76
    if g == 3:
        return 231
    return (16 * g**4 + 37 * g**2 - 28 * g - 1) // (g - 1) ** 2


def envelope(g: int) -> int:
    g = _genus(g)
    return 16 * g * g + 32 * g + 124


@dataclass
class BoundReport:
    genus: int
    epsilon: Fraction
    cC: Fraction
    cCtree: Fraction
    cPrime: Fraction
    cPrimeTree: Fraction
    cEps: int
    cEpsTree: int
    torsionC: int
    torsionCtree: int
    halvedC: Optional[int]
    halvedCtree: Optional[int]
    envelope: int
    goodReductionBound: int = 1
    flags: dict = field(default_factory=dict)
    value: int = 0

    def to_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = format_rational(v) if isinstance(v, Fraction) else v
        return out


def count_bound(g: int, eps=0, tree: bool = False, halving: bool = False, good_reduction: bool = False) -> BoundReport:
    """All constants for genus ``g`` and height ratio ``eps``.

    ``value`` is the bound selected by the flags: 1 under everywhere good
    reduction, the tree constant under ``tree``, halved (genus >= 3 only)
    under ``halving``.  The general formula, the closed forms and the
    halving rule are cross-checked on every call.
    """
    g = _genus(g)
    eps = _epsilon(g, eps)
    if green_sup_assembly(g) != green_sup_constant(g) or green_sup_assembly(g, True) != green_sup_constant(g, True):
        raise ArithmeticError(f"green-sup constants disagree at genus {g}")
    c_eps = count_bound_general(g, eps)
    c_eps_tree = count_bound_general(g, eps, tree=True)
    if c_eps != count_bound_closed(g, eps) or c_eps_tree != count_bound_closed(g, eps, tree=True):
        raise ArithmeticError(f"closed forms disagree with the general count at genus {g}")
    torsion = torsion_bound_closed(g)
    torsion_tree = torsion_bound_closed(g, tree=True)
    if torsion != count_bound_general(g, 0) or torsion_tree != count_bound_general(g, 0, tree=True):
        raise ArithmeticError(f"torsion closed forms disagree at genus {g}")
    halved = halved_tree = None
    if g >= 3:
        halved, halved_tree = (c_eps + 1) // 2, (c_eps_tree + 1) // 2
        if halved != count_bound_general(g, eps, halving=True) or halved_tree != count_bound_general(
            g, eps, tree=True, halving=True
        ):
            raise ArithmeticError(f"halving rule disagrees at genus {g}")
    if good_reduction:
        value = 1
    else:
        value = c_eps_tree if tree else c_eps
        if halving and g >= 3:
            value = (value + 1) // 2
    return BoundReport(
        genus=g,
        epsilon=eps,
        cC=cinkir_constant(g),
        cCtree=cinkir_constant(g, tree=True),
        cPrime=green_sup_constant(g),
        cPrimeTree=green_sup_constant(g, tree=True),
        cEps=c_eps,
        cEpsTree=c_eps_tree,
        torsionC=torsion,
        torsionCtree=torsion_tree,
        halvedC=halved,
        halvedCtree=halved_tree,
        envelope=envelope(g),
        flags={"tree": tree, "halving": halving and g >= 3, "goodReduction": good_reduction},
        value=value,
    )
