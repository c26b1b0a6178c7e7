"""Exact rational arithmetic.

gmpy2.mpq is used when available (it is an order of magnitude faster on the
dense convolutions this package spends its time in); fractions.Fraction is a
drop-in fallback so the package still works on a bare interpreter.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat

ZERO = Rat(0)
ONE = Rat(1)


def rat(value, den=None) -> Rat:
    """Coerce ints, strings like '3/4', or rationals to Rat."""
    if den is not None:
        return Rat(value, den)
    if isinstance(value, str):
        return Rat(value)
    return Rat(value)


def rat_str(x) -> str:
    """Canonical text form: 'p/q', or just 'p' when the denominator is 1."""
    x = Rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_int(x) -> int:
    """Exact conversion to int; raises ValueError for non-integers."""
    x = Rat(x)
    if x.denominator != 1:
        raise ValueError(f"{x} is not an integer")
    return int(x.numerator)


def floor_div(x) -> int:
    """Floor of a rational."""
    x = Rat(x)
    return int(x.numerator) // int(x.denominator)
