import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from gqprim import groups as G
from gqprim.factor import Factorization
from gqprim.params import (
    GQParams,
    admissible,
    admissible_pairs,
    lemma22_max_fix,
    scan_solve,
    solve,
    solve_from_factorization,
    solve_power,
    theorem_bound_report,
)


def brute_admissible(s, t):
    return s >= 2 and t >= 2 and s <= t * t and t <= s * s and (s * t * (s * t + 1)) % (s + t) == 0


def test_classical_orders_admissible():
    for s, t in [(2, 2), (2, 4), (3, 3), (3, 9), (4, 2), (4, 4), (4, 16), (5, 25), (11, 19), (19, 53)]:
        assert admissible(s, t), (s, t)
    assert not admissible(1, 2)
    assert not admissible(2, 5)    # t > s^2
    assert not admissible(3, 4)    # 7 does not divide 12*13


def test_gqparams():
    p = GQParams(2, 4)
    assert (p.points, p.lines) == (27, 45)
    assert p.t_eq_s_plus_2 and not p.coprime
    q = GQParams(11, 19)
    assert q.coprime and q.coprime_and_t_gt_s and q.dual_admissible
    with pytest.raises(ValueError):
        GQParams(2, 5)


@pytest.mark.parametrize("x,expected", [
    (2520, [(11, 19)]),              # Alt7
    (20160, [(19, 53)]),             # Alt8
    (360**2, [(19, 341)]),
    (7920**2, [(89, 7831)]),
    (175560**2, [(419, 175141)]),
    (27, [(2, 4)]),
    (15, [(2, 2)]),
    (60, []),
    (360, []),
])
def test_solve_examples(x, expected):
    assert solve(x).pairs() == expected


def test_solve_rejects_small():
    with pytest.raises(ValueError):
        solve(14)


@given(st.integers(15, 10**6))
@settings(max_examples=500, deadline=None)
def test_solve_matches_scan(x):
    assert solve(x).pairs() == scan_solve(x)


def test_solve_matches_scan_catalog_orders():
    xs = {G.order(G.alt(n)) for n in range(5, 10)}
    xs |= {G.order(G.lie("A", q, 1)) for q in (4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27)}
    for x in sorted(v for v in xs if v <= 10**6):
        assert solve(x).pairs() == scan_solve(x)


def test_solve_power_agrees_with_solve():
    for base, r in [(60, 2), (60, 3), (168, 2), (360, 3), (40320, 3)]:
        assert solve_power(base, r).pairs() == solve(base**r).pairs()


def test_budget_controls_completeness():
    s = 10**18 + 9  # prime
    t = s + 2
    x = (s + 1) * (s * t + 1)
    starved = solve(x, budget_ms=0)
    assert not starved.complete and starved.unresolved_cofactor > 1
    full = solve(x)
    assert full.complete and full.pairs() == [(s, t)]


def test_cofactor_candidates_are_tried():
    # the prime s is left as the unresolved cofactor; s = C must still be tried
    s, t = 10**18 + 9, 10**18 + 11
    x = (s + 1) * (s * t + 1)
    m = x - 1  # = s * ((s+1)t + 1)
    known = factorint((s + 1) * t + 1)
    f = Factorization(m, {int(p): e for p, e in known.items()}, s)
    assert (s, t) in solve_from_factorization(x, f).pairs()


def test_lemma22_max_fix():
    assert lemma22_max_fix(2, 4) == 15
    assert lemma22_max_fix(40319, 40321) == 40320 * 40322
    # grid branch: s >= t + 3 uses s^2 - 1 when that is larger
    assert lemma22_max_fix(9, 3) == max(40, 80)
    assert lemma22_max_fix(4, 2) == 15


def test_theorem_bound_report_2_4():
    rep = theorem_bound_report(2, 4)
    first = rep["comparisons"][0]
    assert first["relation"] == "<" and first["holds"] is False  # 15 >= 27^(4/5)
    assert rep["max_fix"] == "15"


def test_admissible_pairs_brute_force():
    want = [(s, t) for s in range(2, 31) for t in range(2, s * s + 1) if brute_admissible(s, t)]
    assert admissible_pairs(30) == want


def test_scan_limit():
    with pytest.raises(ValueError):
        scan_solve(10**9 + 1)


def test_random_x_oracle():
    rng = random.Random(7)
    for _ in range(10**4):
        x = rng.randint(15, 10**6)
        assert solve(x).pairs() == scan_solve(x)
