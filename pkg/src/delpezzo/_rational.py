"""Exact rational scalars.

Every scalar in this package is a ``fractions.Fraction``; nothing is ever
converted to float.  This module holds the few helpers the rest of the code
shares: parsing/printing of ``p/q`` strings and exact floors of rational
quotients.
"""

from __future__ import annotations

import math
from fractions import Fraction

Rat = Fraction

RationalLike = Fraction | int | str


def rat(value: RationalLike) -> Fraction:
    """Coerce an int, ``p/q`` string or Fraction into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a rational value: {value!r}")


def fmt(value: Fraction) -> str:
    """Render a Fraction as ``p/q``, or plain ``p`` for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def floor_frac(value: Fraction) -> int:
    """Exact floor of a rational number (no float round-trip)."""
    return math.floor(value)


def ceil_frac(value: Fraction) -> int:
    return math.ceil(value)
