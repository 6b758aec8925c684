"""Parameters (s, t) of thick generalised quadrangles with a given point count.

A quadrangle of order (s, t) has X = (s+1)(st+1) points.  Rearranging gives
s | X-1 and t = ((X-1)/s - 1)/(s+1), so candidate orders come from the
divisors of X-1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .arith import power_lt
from .factor import DEFAULT_BUDGET_MS, Factorization, factorize, factorize_power_minus_one

SCAN_LIMIT = 10**9
PROP752_S_BOUND = Fraction(29701, 10**4) * 10**15


def admissible(s: int, t: int) -> bool:
    """Basic constraints on the order of a thick finite GQ."""
    return (
        s >= 2
        and t >= 2
        and s <= t * t
        and t <= s * s
        and (s * t * (s * t + 1)) % (s + t) == 0
    )


@dataclass(frozen=True)
class GQParams:
    s: int
    t: int

    def __post_init__(self) -> None:
        if not admissible(self.s, self.t):
            raise ValueError(f"({self.s}, {self.t}) is not an admissible GQ order")

    @property
    def points(self) -> int:
        return (self.s + 1) * (self.s * self.t + 1)

    @property
    def lines(self) -> int:
        return (self.t + 1) * (self.s * self.t + 1)

    @property
    def coprime(self) -> bool:
        return gcd(self.s, self.t) == 1

    @property
    def t_eq_s_plus_2(self) -> bool:
        return self.t == self.s + 2

    @property
    def dual_admissible(self) -> bool:
        return admissible(self.t, self.s)

    @property
    def coprime_and_t_gt_s(self) -> bool:
        """gcd(s,t)=1 and t >= s+1, the constraints reported for the HS/HC case."""
        return self.coprime and self.t >= self.s + 1

    def flags(self) -> dict[str, bool]:
        return {
            "coprime": self.coprime,
            "t_eq_s_plus_2": self.t_eq_s_plus_2,
            "dual_admissible": self.dual_admissible,
            "coprime_and_t_gt_s": self.coprime_and_t_gt_s,
        }


@dataclass(frozen=True)
class SolveResult:
    x: int
    solutions: tuple[GQParams, ...]
    complete: bool
    unresolved_cofactor: int = 1

    def pairs(self) -> list[tuple[int, int]]:
        return [(p.s, p.t) for p in self.solutions]

    def records(self) -> list[dict]:
        return [
            {"x": str(self.x), "s": str(p.s), "t": str(p.t), "coprime": p.coprime, "complete": self.complete}
            for p in self.solutions
        ]


def _t_for(x: int, s: int) -> int | None:
    m = x - 1
    if s < 2 or m % s:
        return None
    q = m // s - 1
    if q <= 0 or q % (s + 1):
        return None
    return q // (s + 1)


def _candidate_divisors(f: Factorization) -> list[int]:
    divs = f.divisors()
    c = f.unresolved_cofactor
    if c == 1:
        return divs
    # s may involve the unresolved part; C and d*C are the certain extras
    return sorted(set(divs) | {d * c for d in divs})


def solve_from_factorization(x: int, f: Factorization) -> SolveResult:
    if f.n != x - 1:
        raise ValueError("factorization must be of x - 1")
    sols = []
    for s in _candidate_divisors(f):
        t = _t_for(x, s)
        if t is not None and admissible(s, t):
            sols.append(GQParams(s, t))
    return SolveResult(x, tuple(sols), f.complete, f.unresolved_cofactor)


def solve(x: int, budget_ms: int = DEFAULT_BUDGET_MS) -> SolveResult:
    """All admissible (s, t) with (s+1)(st+1) = x, from the divisors of x-1."""
    if x < 15:
        raise ValueError("x must be at least 15, the smallest thick GQ")
    return solve_from_factorization(x, factorize(x - 1, budget_ms))


def solve_power(base: int, r: int, budget_ms: int = DEFAULT_BUDGET_MS) -> SolveResult:
    """``solve(base**r)``, factoring base**r - 1 through its cyclotomic pieces."""
    x = base**r
    if x < 15:
        raise ValueError("x must be at least 15, the smallest thick GQ")
    return solve_from_factorization(x, factorize_power_minus_one(base, r, budget_ms))


def scan_solve(x: int) -> list[tuple[int, int]]:
    """Brute-force oracle for :func:`solve`, scanning every feasible s.

    Only s with (s+1)(2s+1) <= x can give t >= 2, so the scan stops there.
    """
    if x > SCAN_LIMIT:
        raise ValueError(f"scan_solve is limited to x <= {SCAN_LIMIT}")
    if x < 15:
        return []
    smax = 2
    while (smax + 2) * (2 * smax + 3) <= x:
        smax += 1
    s = np.arange(2, smax + 1, dtype=np.int64)
    m = np.int64(x - 1)
    s = s[m % s == 0]
    q = m // s - 1
    s, q = s[q % (s + 1) == 0], q[q % (s + 1) == 0]
    t = q // (s + 1)
    return [(int(a), int(b)) for a, b in zip(s, t) if admissible(int(a), int(b))]


def lemma22_max_fix(s: int, t: int) -> int:
    """Largest possible number of points fixed by a nonidentity collineation."""
    cap = (s + 1) * (t + 1)
    if s < t + 3:
        return cap
    return max(cap, s * s - 1)


@dataclass(frozen=True)
class Comparison:
    lhs: str
    rhs: str
    relation: str
    holds: bool
    anchor: str

    def as_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "relation": self.relation,
                "holds": self.holds, "anchor": self.anchor}


def compare_lt(a: int, pa: Fraction | int, b: int, pb: Fraction | int, anchor: str) -> Comparison:
    pa, pb = Fraction(pa), Fraction(pb)
    lhs = str(a) if pa == 1 else f"{a}^({pa})"
    rhs = str(b) if pb == 1 else f"{b}^({pb})"
    return Comparison(lhs, rhs, "<", power_lt(a, pa, b, pb), anchor)


def theorem_bound_report(s: int, t: int) -> dict:
    """Exact verdicts for the fixed-point bounds of a GQ of order (s, t)."""
    p = GQParams(s, t)
    x = p.points
    cap = (s + 1) * (t + 1)
    comps = [
        compare_lt(cap, 1, x, Fraction(4, 5), "4/5 bound, main branch"),
        compare_lt(cap, 1, x, Fraction(7, 9), "7/9 bound"),
        compare_lt(cap, 1, x, Fraction(94, 125), "94/125 bound"),
        compare_lt(lemma22_max_fix(s, t), 1, x, Fraction(4, 5), "4/5 bound, substructure cap"),
    ]
    if s >= t + 3:
        comps.append(compare_lt(s * s, 1, x, Fraction(4, 5), "grid case s^2 vs 4/5"))
    if p.t_eq_s_plus_2:
        # with t = s+2 the point count is (s+1)^3
        comps.append(compare_lt(cap, 1, x, Fraction(7, 9), "t=s+2, s>=3: 7/9"))
        comps.append(compare_lt(cap, 1, x, Fraction(13, 18), "t=s+2, s>=5: 13/18"))
    return {
        "s": str(s),
        "t": str(t),
        "points": str(x),
        "max_fix": str(lemma22_max_fix(s, t)),
        "s_below_94_125_threshold": s < PROP752_S_BOUND,
        "flags": p.flags(),
        "comparisons": [c.as_dict() for c in comps],
    }


def admissible_pairs(s_max: int) -> list[tuple[int, int]]:
    """All admissible (s, t) with 2 <= s <= s_max (t ranges up to s^2)."""
    if s_max > 1000:
        raise ValueError("admissible_pairs is a desk-scale scanner (s_max <= 1000)")
    out = []
    for s in range(2, s_max + 1):
        t = np.arange(2, s * s + 1, dtype=np.int64)
        t = t[(t * t >= s) & ((s * t * (s * t + 1)) % (s + t) == 0)]
        out.extend((s, int(v)) for v in t if admissible(s, int(v)))
    return out
