"""Exact comparisons between rational powers of positive integers.

Every fractional-exponent inequality in the package goes through
:func:`power_lt`; nothing is ever compared in floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Union

Exponent = Union[int, Fraction, str]


def as_fraction(e: Exponent) -> Fraction:
    f = Fraction(e)
    if f <= 0:
        raise ValueError(f"exponent must be positive, got {f}")
    return f


def _cross_powers(a: int, pa: Exponent, b: int, pb: Exponent) -> tuple[int, int]:
    if a < 1 or b < 1:
        raise ValueError("bases must be positive integers")
    fa, fb = as_fraction(pa), as_fraction(pb)
    m = lcm(fa.denominator, fb.denominator)
    # a^(fa*m) and b^(fb*m) are integer powers
    return a ** (fa.numerator * (m // fa.denominator)), b ** (fb.numerator * (m // fb.denominator))


def power_lt(a: int, pa: Exponent, b: int, pb: Exponent) -> bool:
    """Return whether ``a**pa < b**pb`` exactly."""
    lhs, rhs = _cross_powers(a, pa, b, pb)
    return lhs < rhs


def power_cmp(a: int, pa: Exponent, b: int, pb: Exponent) -> int:
    """Three-way comparison of ``a**pa`` and ``b**pb`` (-1, 0 or 1)."""
    lhs, rhs = _cross_powers(a, pa, b, pb)
    return (lhs > rhs) - (lhs < rhs)


def below_power(c: int, t: int, exponent: Exponent) -> bool:
    """``c < t**exponent`` for ``0 < exponent``."""
    return power_lt(c, 1, t, exponent)


def iroot_floor(x: int, k: int) -> int:
    """Largest integer ``r`` with ``r**k <= x``."""
    if x < 0 or k < 1:
        raise ValueError("need x >= 0 and k >= 1")
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r
