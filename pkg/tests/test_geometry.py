from fractions import Fraction

import numpy as np
import pytest

from gqprim.arith import power_lt
from gqprim.geometry import (
    PRECEDENCE,
    Case,
    GeometryError,
    IncidenceGeometry,
    automorphism_group,
    build_classical,
    collineation,
    find_fixing,
    fixed_substructure,
    fixity_profile,
    srg_params,
    verify_gq,
)
from gqprim.permgroups import Permutation, conjugacy_classes, conjugacy_orbit


@pytest.fixture(scope="module")
def w32():
    return build_classical("W32", 2)


@pytest.fixture(scope="module")
def q52():
    return build_classical("Qminus5", 2)


@pytest.fixture(scope="module")
def q53():
    return build_classical("Qminus5q", 3)


def test_sizes_and_orders(w32, q52, q53):
    for g, pts, lines, st in ((w32, 15, 15, (2, 2)), (q52, 27, 45, (2, 4)), (q53, 112, 280, (3, 9))):
        assert (g.num_points, g.num_lines) == (pts, lines)
        o = verify_gq(g)
        assert (o.s, o.t) == st


def test_srg(w32, q52, q53):
    assert srg_params(w32) == (15, 6, 1, 3)
    assert srg_params(q52) == (27, 10, 1, 5)
    assert srg_params(q53) == (112, 30, 2, 10)
    for g in (w32, q52, q53):
        o = verify_gq(g)
        s, t = o.s, o.t
        assert srg_params(g) == ((s + 1) * (s * t + 1), s * (t + 1), s - 1, t + 1)


def test_grid_is_not_thick():
    grid = IncidenceGeometry(9, [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8)], "grid")
    with pytest.raises(GeometryError):
        verify_gq(grid)
    o = verify_gq(grid, thick=False)
    assert (o.s, o.t) == (2, 1)


def test_broken_geometry_rejected(w32):
    lines = [tuple(np.flatnonzero(w32.incidence[:, j])) for j in range(w32.num_lines)]
    # swap one point between two lines: sizes stay but the axiom breaks
    a, b = list(lines[0]), list(lines[1])
    extra = next(p for p in b if p not in a)
    a[0], b[b.index(extra)] = extra, a[0]
    bad = IncidenceGeometry(15, [tuple(a), tuple(b)] + lines[2:], "broken")
    with pytest.raises(GeometryError):
        verify_gq(bad)


def test_dump_roundtrip(q52):
    o = verify_gq(q52)
    text = q52.dump(o)
    assert text.startswith("points=27 lines=45 s=2 t=4")
    back = IncidenceGeometry.load(text)
    assert np.array_equal(back.incidence, q52.incidence)


def test_automorphism_orders(w32, q52, q53):
    assert automorphism_group(w32).order == 720
    assert automorphism_group(q52).order == 51840
    # pinned from the first BSGS count; no order is given in the source
    assert automorphism_group(q53).order == 26127360


def test_generators_preserve_lines(q52):
    A = automorphism_group(q52)
    lines = {frozenset(np.flatnonzero(q52.incidence[:, j]).tolist()) for j in range(q52.num_lines)}
    for g in A.generators:
        img = {frozenset(g.images[p] for p in L) for L in lines}
        assert img == lines


def test_w32_profile(w32):
    prof = fixity_profile(automorphism_group(w32))
    assert sum(prof.values()) == 720 and prof[15] == 1
    assert max(k for k in prof if k != 15) == 7


def test_q52_profile(q52):
    prof = fixity_profile(automorphism_group(q52))
    assert prof[27] == 1 and prof[15] == 36
    assert max(k for k in prof if k not in (27, 15)) <= 9
    assert sum(prof.values()) == 51840


def test_q52_special_involutions(q52):
    A = automorphism_group(q52)
    o = verify_gq(q52)
    p = find_fixing(A, 15)
    assert p.order() == 2
    sub = fixed_substructure(q52, collineation(q52, p), o)
    assert sub.case is Case.SUB_GQ and (sub.sub_order.s, sub.sub_order.t) == (2, 2)
    assert sub.fixed_points == 15


def test_q53_forty_fixer(q53):
    A = automorphism_group(q53)
    o = verify_gq(q53)
    p = find_fixing(A, 40)
    assert p is not None
    sub = fixed_substructure(q53, collineation(q53, p), o)
    assert sub.case is Case.SUB_GQ and (sub.sub_order.s, sub.sub_order.t) == (3, 3)


def test_identity_rejected(w32):
    with pytest.raises(ValueError):
        fixed_substructure(w32, collineation(w32, Permutation.identity(15)))


def test_non_collineation_rejected(w32):
    p = Permutation.from_cycles(15, [(0, 1)])
    assert not automorphism_group(w32).contains(p)
    with pytest.raises(ValueError):
        collineation(w32, p)


@pytest.mark.parametrize("name", ["w32", "q52"])
def test_every_class_obeys_bounds(name, request):
    g = request.getfixturevalue(name)
    o = verify_gq(g)
    A = automorphism_group(g)
    cd = conjugacy_classes(A)
    x = (o.s + 1) * (o.s * o.t + 1)
    for c in range(len(cd.sizes)):
        if c == cd.identity_class:
            continue
        p = cd.representative(c)
        sub = fixed_substructure(g, collineation(g, p), o)
        assert sub.bounds_hold
        assert sub.case in PRECEDENCE
        if sub.fixed_points == 15 and (o.s, o.t) == (2, 4):
            assert not power_lt(15, 1, 27, Fraction(4, 5))
        else:
            assert sub.fixed_points == 0 or power_lt(sub.fixed_points, 1, x, Fraction(4, 5))


@pytest.mark.long
def test_q53_full_profile(q53):
    A = automorphism_group(q53)
    prof = fixity_profile(A)
    assert prof[112] == 1
    nonid = {k: v for k, v in prof.items() if k != 112}
    assert max(nonid) == 40
    assert max(k for k in nonid if k != 40) <= 16
    # the 40-fixers form a single conjugacy class
    p = find_fixing(A, 40)
    assert len(conjugacy_orbit(A, p)) == nonid[40]
