import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import divisors, factorint, isprime, nextprime

from gqprim.factor import (
    Factorization,
    factorize,
    factorize_power_minus_one,
    is_probable_prime,
    merge,
    small_primes,
)


def test_small_primes_sieve():
    ps = small_primes()
    assert ps[:6] == (2, 3, 5, 7, 11, 13)
    assert len(ps) == 78498  # pi(10^6)


@given(st.integers(1, 10**18))
@settings(max_examples=200, deadline=None)
def test_factorize_matches_sympy(n):
    f = factorize(n)
    assert f.complete
    assert f.primes == factorint(n) or (n == 1 and f.primes == {})
    assert f.value() == n


@pytest.mark.parametrize("bits", [24, 32, 40])
def test_semiprimes(bits):
    rng = random.Random(bits)
    p = nextprime(rng.getrandbits(bits))
    q = nextprime(rng.getrandbits(bits))
    f = factorize(p * q)
    assert f.complete and f.value() == p * q
    assert set(f.primes) == {p, q}


@given(st.integers(2, 10**40))
@settings(max_examples=200, deadline=None)
def test_primality_matches_sympy(n):
    assert is_probable_prime(n) == isprime(n)


def test_known_pseudoprimes_rejected():
    # strong pseudoprimes to several small bases, and Carmichael numbers
    for n in (561, 1105, 3215031751, 3825123056546413051, 318665857834031151167461):
        assert not is_probable_prime(n)


def test_budget_exhaustion_reports_cofactor():
    p = nextprime(10**30)
    q = nextprime(10**31)
    f = factorize(6 * p * q, budget_ms=0)
    assert f.primes.get(2) == 1 and f.primes.get(3) == 1
    assert f.unresolved_cofactor == p * q
    assert not f.complete
    assert f.value() == 6 * p * q


def test_divisors_use_resolved_primes():
    f = Factorization(720, {2: 4, 3: 2, 5: 1})
    assert f.divisors() == divisors(720)


@pytest.mark.parametrize("a,r", [(60, 3), (360, 2), (7920, 2), (40320, 4), (10**6 + 3, 3), (175560, 3)])
def test_power_minus_one(a, r):
    f = factorize_power_minus_one(a, r)
    assert f.complete
    assert f.n == a**r - 1
    assert f.primes == factorint(a**r - 1)


def test_merge():
    f = merge([factorize(12), factorize(45)], 540)
    assert f.primes == {2: 2, 3: 3, 5: 1}
