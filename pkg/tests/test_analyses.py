import json
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gqprim import groups as G
from gqprim.analyses import (
    CONSISTENT,
    CONTRADICTION,
    BudgetExceeded,
    desk_check,
    diagonal_fixed_points,
    enumerate_partitions,
    fixity_scenario,
    nontrivial_product_classes,
    partition_exists,
    partition_scenario,
    pds_check,
    pds_counts,
    pds_scenario,
    positive_control,
    psl2_sweep,
    reproduce_table3,
    run_embedded_scenario,
    sd_scenario,
)
from gqprim.params import lemma22_max_fix, scan_solve
from gqprim.permgroups import (
    EnumerationRefused,
    Permutation,
    alternating_group,
    conjugacy_classes,
    direct_product,
    embedded_group,
)

B_OMEGA = 3843461129719173164826624000000


# ------------------------------------------------------------------ helpers

def naive_subset_sum(sizes, target):
    return any(sum(c) == target for k in range(len(sizes) + 1) for c in combinations(sizes, k))


@pytest.fixture(scope="module")
def a5():
    return conjugacy_classes(alternating_group(5))


@pytest.fixture(scope="module")
def a6():
    return conjugacy_classes(alternating_group(6))


class ProductOracle:
    """Counts in T x T computed on the product permutation group itself."""

    def __init__(self, cd):
        self.cd = cd
        n = cd.group.degree
        self.n = n
        self.P = direct_product(cd.group, cd.group)
        self.X = self.P.elements_array()
        self.c1 = cd.classes_of(self.X[:, :n])
        self.c2 = cd.classes_of(self.X[:, n:] - n)

    def mask(self, D):
        Dm = np.zeros((len(self.cd.sizes),) * 2, dtype=bool)
        for c in D:
            Dm[c] = True
        return Dm[self.c1, self.c2]

    def element(self, cls):
        a = self.cd.representative(cls[0]).array()
        b = self.cd.representative(cls[1]).array() + self.n
        return np.concatenate([a, b])

    def count(self, D, y):
        m = self.mask(D)
        moved = self.P.index_of(self.X[:, y])
        return int(np.sum(m & m[moved]))


# ------------------------------------------------------- fixed-point arithmetic

def test_diagonal_fixed_points():
    assert diagonal_fixed_points(12, 60, 2, 1) == 12
    assert diagonal_fixed_points(5, 60, 2, 3) == 18000
    assert diagonal_fixed_points(5, 60, 3, 2) == 25 * 60**2
    with pytest.raises(ValueError):
        diagonal_fixed_points(60, 60, 2, 2)
    with pytest.raises(ValueError):
        diagonal_fixed_points(5, 60, 1, 2)


def test_sd_examples():
    rep = sd_scenario(G.alt(5), 2, 4)
    assert rep.conclusion == CONTRADICTION
    assert sd_scenario(G.alt(6), 2, 2).conclusion == CONSISTENT
    rep = sd_scenario(G.alt(5), 2, 3)
    assert rep.details["diagonal_fixed_points"] == "18000"
    seven_ninths = [c for c in rep.comparisons if "7/9" in c.anchor]
    assert seven_ninths and seven_ninths[0].holds == (18000**9 < 60**21)
    assert rep.details["only_obvious_solution"]


@pytest.mark.parametrize("g", [G.alt(5), G.alt(6), G.sporadic("J1"), G.sporadic("M11"), G.lie("A", 8, 1)])
def test_r4_always_fails(g):
    assert sd_scenario(g, 2, 4).conclusion == CONTRADICTION


# ------------------------------------------------------- small-group table

def test_table3_rows():
    rep = reproduce_table3(extended=False)
    assert rep.conclusion == CONSISTENT
    got = {(r["group"], r["r"]): r["solutions"] for r in rep.details["rows"]}
    assert got[("Alt7", 1)] == [["11", "19"]]
    assert got[("J1", 2)] == [["419", "175141"]]
    assert got[("M11", 2)] == [["89", "7831"]]
    assert [c.lhs for c in rep.comparisons] == ["220", "1026", "6498", "697048", "73384498"]


def test_table3_extended():
    rep = reproduce_table3(extended=True)
    assert rep.conclusion == CONSISTENT
    assert rep.details["mismatches"] == [] and rep.details["incomplete"] == []
    checked = {(e["group"], e["r"]) for e in rep.details["extra_checked"]}
    assert ("Alt(5)", 1) in checked and ("Alt(9)", 1) in checked and ("M", 1) in checked


# ------------------------------------------------------------- partitions

def test_partition_examples():
    assert not partition_exists([70, 105, 210], 220)
    assert not partition_exists([105, 112, 210], 1026)
    assert partition_exists([1, 2, 3], 0)
    assert partition_exists([5, 5, 7], 10)
    assert not partition_exists([5, 7], 10)
    with pytest.raises(BudgetExceeded):
        partition_exists([1], 100, bit_budget=64)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 60), max_size=14), st.integers(0, 400))
def test_partition_exists_matches_naive(sizes, target):
    assert partition_exists(sizes, target) == naive_subset_sum(sizes, target)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 30), max_size=10), st.integers(0, 100))
def test_enumerate_matches_brute_force(sizes, target):
    items = [(s, i) for i, s in enumerate(sizes)]
    got, trunc = enumerate_partitions(items, target)
    assert not trunc
    want = {frozenset(c) for k in range(len(items) + 1) for c in combinations(range(len(items)), k)
            if sum(sizes[i] for i in c) == target}
    assert {frozenset(p) for p in got} == want
    assert len(got) == len(want)
    assert bool(got) == partition_exists(sizes, target)


def test_enumerate_edge_cases():
    assert enumerate_partitions([(3, "a")], 0) == ([()], False)
    parts, trunc = enumerate_partitions([(1, i) for i in range(10)], 5, cap=3)
    assert trunc and len(parts) == 3


def test_alt7_alt8_partitions():
    for name, target in (("Alt7", 220), ("Alt8", 1026)):
        rep = partition_scenario(name, 1)
        assert rep.details["partition_exists"] == {str(target): False}
    cd7 = conjugacy_classes(alternating_group(7))
    small = sorted(s for s in cd7.class_sizes() if 1 < s <= 220)
    assert small == [70, 105, 210]
    assert enumerate_partitions(nontrivial_product_classes(cd7, 1), 220) == ([], False)


def test_alt6_squared_candidates(a6):
    parts, trunc = enumerate_partitions(nontrivial_product_classes(a6, 2), 6498)
    assert not trunc
    # pinned at first run
    assert len(parts) == 680


# -------------------------------------------------- partial difference sets

@pytest.fixture(scope="module")
def a5_oracle(a5):
    return ProductOracle(a5)


def _random_class_union(cd, rng, k):
    classes = [c for _, c in nontrivial_product_classes(cd, 2)]
    return [classes[i] for i in rng.choice(len(classes), size=k, replace=False)]


def test_pds_counts_match_product_group_oracle(a5, a5_oracle):
    rng = np.random.default_rng(11)
    for k in (1, 3, 6):
        D = _random_class_union(a5, rng, k)
        fast = list(pds_counts(a5, 2, D, "fast"))
        direct = list(pds_counts(a5, 2, D, "direct"))
        assert fast == direct
        for cls, n, inside in fast:
            assert n == a5_oracle.count(D, a5_oracle.element(cls))


def test_pds_count_conjugation_invariant(a5, a5_oracle):
    rng = np.random.default_rng(5)
    D = _random_class_union(a5, rng, 4)
    P = a5_oracle.P
    for cls, n, _ in list(pds_counts(a5, 2, D))[:8]:
        y = Permutation.from_array(a5_oracle.element(cls))
        h = P.random_element(rng)
        conj = (h.inverse() * y * h).array()
        assert a5_oracle.count(D, conj) == n


def test_pds_r1_matches_direct(a6):
    D = [(c,) for c in range(len(a6.sizes)) if c != a6.identity_class][:3]
    assert list(pds_counts(a6, 1, D, "fast")) == list(pds_counts(a6, 1, D, "direct"))


def test_positive_control_and_oracle():
    assert positive_control().passed
    D = {(1, 0), (2, 0), (0, 1), (0, 2)}
    for y in product(range(3), repeat=2):
        if y == (0, 0):
            continue
        n = sum(((a + y[0]) % 3, (b + y[1]) % 3) in D for a, b in D)
        assert n == (1 if y in D else 2)


def test_degenerate_empty_set(a5):
    assert pds_check(a5, 2, [], 0, 0).passed
    assert not pds_check(a5, 2, [], 0, 1).passed


def test_identity_not_allowed(a5):
    e = a5.identity_class
    with pytest.raises(ValueError):
        pds_check(a5, 2, [(e, e)], 0, 0)


def test_alt6_pds_elimination():
    rep = pds_scenario("Alt6")
    assert rep.conclusion == CONSISTENT
    d = rep.details["(19,341)"]
    assert (d["lambda"], d["mu"], d["partitions"]) == (18, 342, 680)
    assert rep.details["passing_candidates"] == []
    assert len(rep.comparisons) == 680


def test_m11_needs_long():
    with pytest.raises(EnumerationRefused):
        pds_scenario("M11")
    cd = conjugacy_classes(embedded_group("M11"))
    with pytest.raises(EnumerationRefused):
        pds_check(cd, 2, [(1, 0)], 0, 0, method="direct")


@pytest.mark.long
def test_m11_pds_elimination():
    rep = pds_scenario("M11", long=True)
    assert rep.details["(89,7831)"]["partitions"] == 13476
    assert rep.conclusion == CONSISTENT


@pytest.mark.long
def test_m11_direct_agrees_on_sample():
    cd = conjugacy_classes(embedded_group("M11"))
    parts, _ = enumerate_partitions(nontrivial_product_classes(cd, 2), 697048, cap=3)
    for D in parts:
        fast = pds_check(cd, 2, D, 88, 7832)
        direct = pds_check(cd, 2, D, 88, 7832, method="direct", long=True)
        assert fast == direct and not fast.passed


def test_j1_squared_partition():
    rep = partition_scenario("J1", 2)
    assert rep.details["nontrivial_class_sizes"] == 224
    assert rep.details["partition_exists"] == {"73384498": False}


# ------------------------------------------------------------ fixity scenarios

def test_m23():
    rep = run_embedded_scenario("M23", 3)
    assert rep.solutions == [{"s": "40319", "t": "40321"}]
    assert rep.conclusion == CONTRADICTION
    cap = [c for c in rep.comparisons if "substructure cap" in c.anchor][0]
    assert (cap.lhs, cap.rhs, cap.holds) == ("8128512000", "1625783040", False)
    assert lemma22_max_fix(40319, 40321) == 1625783040
    four = run_embedded_scenario("M23", 4)
    assert four.solutions == [] and four.conclusion == CONTRADICTION


def test_baby_monster():
    rep = run_embedded_scenario("B", 3)
    assert rep.solutions == [{"s": str(B_OMEGA - 1), "t": str(B_OMEGA + 1)}]
    assert 22 * B_OMEGA**2 > (B_OMEGA + 1) * (B_OMEGA + 3)
    assert rep.conclusion == CONTRADICTION
    assert run_embedded_scenario("B", 4).solutions == []


def test_sym7():
    rep = run_embedded_scenario("Sym7", 3)
    assert rep.solutions == [{"s": "119", "t": "121"}]
    assert rep.conclusion == CONTRADICTION
    seven = [c for c in rep.comparisons if "7/9" in c.anchor][0]
    assert not seven.holds
    # 8 > 120^(1/3), so (u,1,1) beats |P|^(7/9)
    assert 8**3 > 120


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 10**5))
def test_boundary_witness_never_contradicts(omega):
    r = 3
    s, t = omega - 1, omega + 1
    f = lemma22_max_fix(s, t) // omega ** (r - 1)
    rep = fixity_scenario(omega, r, [(f, "boundary")])
    assert rep.conclusion != CONTRADICTION


def test_report_json_carries_anchors():
    rep = run_embedded_scenario("B", 3)
    data = json.loads(rep.to_json())
    assert set(data) >= {"scenario", "inputs", "comparisons", "conclusion"}
    assert all(c["anchor"] for c in data["comparisons"])
    assert data["inputs"]["omega"] == str(B_OMEGA)


# --------------------------------------------------------------- sweeps

def test_psl2_sweep_small():
    rep = psl2_sweep(1000)
    assert rep.conclusion == CONSISTENT
    assert rep.details["with_solutions"] == [] and rep.details["incomplete"] == []
    assert scan_solve(60) == [] and scan_solve(360) == []


def test_psl2_sweep_parallel_matches_serial():
    a = psl2_sweep(300)
    b = psl2_sweep(300, jobs=2)
    assert a.to_json() == b.to_json()


def test_desk_check_small():
    rep = desk_check(30)
    assert rep["cap_exceptions"] == [[2, 2], [2, 4]]
    assert rep["exceptions"] == [[2, 4]]
    assert rep["small_fixities"] == {"(2,2)": 7, "(2,4)": 15}
