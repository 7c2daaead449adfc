"""Exact rational arithmetic helpers.

All model data is kept as Python ints or fractions.Fraction so feasibility
and optimality checks carry no floating-point tolerance. Integral values
stay plain ints; JSON keeps them as plain numbers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def to_rational(value) -> Rational:
    """Coerce a JSON-ish value (int, float, "p/q" string, [num, den]) to an exact rational."""
    if isinstance(value, bool):
        raise ValueError(f"boolean is not a number: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coefficient: {value!r}")
        # str() gives the shortest decimal repr, matching what the user typed
        frac = Fraction(str(value))
        return int(frac) if frac.denominator == 1 else frac
    if isinstance(value, str):
        frac = Fraction(value)
        return int(frac) if frac.denominator == 1 else frac
    if isinstance(value, (list, tuple)) and len(value) == 2:
        frac = Fraction(int(value[0]), int(value[1]))
        return int(frac) if frac.denominator == 1 else frac
    raise ValueError(f"cannot interpret {value!r} as a rational number")


def is_integral(value: Rational) -> bool:
    return isinstance(value, int) or value.denominator == 1


def as_int(value: Rational) -> int:
    if isinstance(value, int):
        return value
    if value.denominator != 1:
        raise ValueError(f"{value} is not integral")
    return value.numerator


def simplify(value: Rational) -> Rational:
    """Collapse integral Fractions back to plain ints."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def rational_to_json(value: Rational):
    """ints stay JSON numbers; proper fractions become "p/q" strings."""
    if isinstance(value, int):
        return value
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def floor_div(num: Rational, den: Rational) -> int:
    """Exact floor(num / den) for rationals."""
    return math.floor(Fraction(num) / Fraction(den)) if not (isinstance(num, int) and isinstance(den, int)) else num // den


def ceil_div(num: Rational, den: Rational) -> int:
    """Exact ceil(num / den) for rationals."""
    if isinstance(num, int) and isinstance(den, int):
        return -((-num) // den)
    return math.ceil(Fraction(num) / Fraction(den))
