"""Integer factorisation: trial division, Pollard-Brent rho, Miller-Rabin.

Results are always honest about completeness: if the time budget runs out
the remaining composite part is handed back as ``unresolved_cofactor``.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

TRIAL_LIMIT = 10**6
DEFAULT_BUDGET_MS = 5000

# Deterministic witness set for n < 3.3e24 (covers all of 2^64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_EXTRA_ROUNDS = 24


@lru_cache(maxsize=1)
def small_primes() -> tuple[int, ...]:
    sieve = np.ones(TRIAL_LIMIT + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(TRIAL_LIMIT) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 2**64, probabilistic above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, d, s, a) for a in _MR_BASES):
        return False
    if n < 1 << 64:
        return True
    # seeded so results are reproducible
    rng = random.Random(n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(_EXTRA_ROUNDS))


class _OutOfTime(Exception):
    pass


def _brent(n: int, c: int, deadline: float) -> int | None:
    """One Pollard-Brent run; returns a nontrivial factor or None."""
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
        if time.monotonic() > deadline:
            raise _OutOfTime
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
    return g if g != n else None


def _split(n: int, deadline: float) -> int:
    for c in range(1, 200):
        f = _brent(n, c, deadline)
        if f:
            return f
    raise _OutOfTime


@dataclass(frozen=True)
class Factorization:
    n: int
    primes: dict[int, int] = field(default_factory=dict)
    unresolved_cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.unresolved_cofactor == 1

    def value(self) -> int:
        v = self.unresolved_cofactor
        for p, e in self.primes.items():
            v *= p**e
        return v

    def divisors(self) -> list[int]:
        """Divisors built from the resolved primes only (sorted)."""
        divs = [1]
        for p, e in sorted(self.primes.items()):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def factorize(n: int, budget_ms: int = DEFAULT_BUDGET_MS) -> Factorization:
    """Factor ``n >= 1`` within ``budget_ms`` of wall time."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    deadline = time.monotonic() + budget_ms / 1000
    primes: dict[int, int] = {}
    m = n
    for p in small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            primes[p] = e
    if m == 1:
        return Factorization(n, primes)
    if m <= TRIAL_LIMIT**2 or is_probable_prime(m):
        # anything left below the trial bound squared is prime
        primes[m] = primes.get(m, 0) + 1
        return Factorization(n, primes)

    stack, unresolved = [m], 1
    while stack:
        c = stack.pop()
        if is_probable_prime(c):
            primes[c] = primes.get(c, 0) + 1
            continue
        r = isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        try:
            f = _split(c, deadline)
        except _OutOfTime:
            unresolved *= c
            continue
        stack += [f, c // f]
    return Factorization(n, dict(sorted(primes.items())), unresolved)


def merge(parts: list[Factorization], n: int) -> Factorization:
    primes: dict[int, int] = {}
    unresolved = 1
    for f in parts:
        for p, e in f.primes.items():
            primes[p] = primes.get(p, 0) + e
        unresolved *= f.unresolved_cofactor
    return Factorization(n, dict(sorted(primes.items())), unresolved)


def _cyclotomic_values(a: int, r: int) -> list[int]:
    """Values Phi_d(a) for d | r, so that their product is a**r - 1."""
    vals: dict[int, int] = {}
    for d in range(1, r + 1):
        if r % d:
            continue
        v = a**d - 1
        for e, w in vals.items():
            if d % e == 0:
                v //= w
        vals[d] = v
    return list(vals.values())


def factorize_power_minus_one(a: int, r: int, budget_ms: int = DEFAULT_BUDGET_MS) -> Factorization:
    """Factor ``a**r - 1`` piecewise through its cyclotomic split."""
    pieces = _cyclotomic_values(a, r)
    share = max(1, budget_ms // len(pieces))
    return merge([factorize(v, share) for v in pieces if v > 1], a**r - 1)
