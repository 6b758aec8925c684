from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from sympy import integer_nthroot

from gqprim.arith import as_fraction, below_power, iroot_floor, power_cmp, power_lt

exponents = st.fractions(min_value=Fraction(1, 12), max_value=3, max_denominator=12)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10**12), exponents, st.integers(1, 10**12), exponents)
def test_power_cmp_matches_high_precision(a, pa, b, pb):
    mpmath.mp.dps = 400
    lhs = mpmath.mpf(a) ** (mpmath.mpf(pa.numerator) / pa.denominator)
    rhs = mpmath.mpf(b) ** (mpmath.mpf(pb.numerator) / pb.denominator)
    if abs(lhs - rhs) < mpmath.mpf(10) ** -300 * max(lhs, rhs):
        return  # ties are covered separately
    assert power_cmp(a, pa, b, pb) == (1 if lhs > rhs else -1)
    assert power_lt(a, pa, b, pb) == (lhs < rhs)


@given(st.integers(2, 1000), st.integers(1, 6), st.integers(1, 6))
def test_exact_ties(b, k, d):
    # (b^k)^(1/k) == b^(d/d)
    assert power_cmp(b**k, Fraction(1, k), b, Fraction(d, d)) == 0
    assert not power_lt(b**k, Fraction(1, k), b, 1)


def test_threshold_edges():
    # 5 < 60^(2/5) ~ 5.14, but 6 is not
    assert below_power(5, 60, Fraction(2, 5))
    assert not below_power(6, 60, Fraction(2, 5))
    # 18000 vs 60^(7/3): cross-power 18000^9 vs 60^21
    assert power_cmp(18000, 1, 60**3, Fraction(7, 9)) == (1 if 18000**9 > 60**21 else -1)


def test_exponent_validation():
    with pytest.raises(ValueError):
        as_fraction(0)
    with pytest.raises(ValueError):
        power_lt(0, 1, 2, 1)
    assert as_fraction("94/125") == Fraction(94, 125)


@given(st.integers(0, 10**60), st.integers(1, 9))
def test_iroot_floor_matches_sympy(x, k):
    assert iroot_floor(x, k) == integer_nthroot(x, k)[0]
