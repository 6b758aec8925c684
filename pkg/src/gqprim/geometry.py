"""Small classical generalised quadrangles and their collineations.

Supported: the symplectic quadrangle W(3,2) and the elliptic quadrics
Q-(5,2), Q-(5,3).  Forms are fixed canonical ones:

* W(3,2):   B(x,y) = x0 y2 + x2 y0 + x1 y3 + x3 y1 over GF(2)
* Q-(5,q):  Q(x) = x0 x1 + x2 x3 + f(x4, x5) with f irreducible,
            f = x4^2 + x4 x5 + x5^2 (q = 2) or x4^2 + x5^2 (q = 3)
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from pathlib import Path

import numpy as np
from scipy.sparse import bmat, csr_matrix

from .permgroups import DEFAULT_ENUM_BUDGET, PermGroup, Permutation, build_bsgs
from .refine import automorphism_generators

DEFAULT_POINT_LIMIT = 512


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class GQOrder:
    s: int
    t: int


@dataclass
class IncidenceGeometry:
    num_points: int
    lines: list[tuple[int, ...]]
    name: str = ""
    incidence: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.lines = [tuple(sorted(l)) for l in self.lines]
        N = np.zeros((self.num_points, len(self.lines)), dtype=np.int8)
        for j, l in enumerate(self.lines):
            for p in l:
                if not 0 <= p < self.num_points:
                    raise GeometryError(f"line {j} has point {p} out of range")
                N[p, j] = 1
        self.incidence = N
        self._line_index = {l: j for j, l in enumerate(self.lines)}

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    def line_index(self, pts) -> int | None:
        return self._line_index.get(tuple(sorted(pts)))

    def collinearity(self) -> np.ndarray:
        N = self.incidence.astype(np.int64)
        A = N @ N.T
        np.fill_diagonal(A, 0)
        return A

    def dump(self, order: GQOrder | None = None) -> str:
        hdr = f"points={self.num_points} lines={self.num_lines}"
        if order is not None:
            hdr += f" s={order.s} t={order.t}"
        return "\n".join([hdr] + [" ".join(map(str, l)) for l in self.lines]) + "\n"

    @classmethod
    def load(cls, text: str) -> "IncidenceGeometry":
        rows = [r for r in text.splitlines() if r.strip()]
        hdr = dict(kv.split("=") for kv in rows[0].split())
        lines = [tuple(int(x) for x in r.split()) for r in rows[1:]]
        g = cls(int(hdr["points"]), lines)
        if g.num_lines != int(hdr["lines"]):
            raise GeometryError("line count does not match header")
        return g


# ---------------------------------------------------------------- construction

def _proj_points(q: int, dim: int) -> list[tuple[int, ...]]:
    """Normalised representatives (first nonzero coordinate 1)."""
    pts = []
    for v in product(range(q), repeat=dim):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def _normalise(v: tuple[int, ...], q: int) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    inv = pow(lead, -1, q)
    return tuple(x * inv % q for x in v)


def _span_points(x, y, q: int) -> frozenset:
    pts = set()
    for a, b in product(range(q), repeat=2):
        if a or b:
            v = tuple((a * xi + b * yi) % q for xi, yi in zip(x, y))
            if any(v):
                pts.add(_normalise(v, q))
    return frozenset(pts)


def _geometry_from(points, is_line_pair, q: int, name: str) -> IncidenceGeometry:
    index = {p: i for i, p in enumerate(points)}
    seen, lines = set(), []
    for i, x in enumerate(points):
        for y in points[i + 1:]:
            if not is_line_pair(x, y):
                continue
            span = _span_points(x, y, q)
            if span in seen:
                continue
            seen.add(span)
            lines.append(tuple(sorted(index[p] for p in span)))
    return IncidenceGeometry(len(points), sorted(lines), name)


def build_classical(kind: str, q: int) -> IncidenceGeometry:
    """``kind`` is ``W32`` (q = 2) or ``Qminus5`` (q in {2, 3})."""
    if kind == "W32" and q == 2:
        def B(x, y):
            return (x[0] * y[2] + x[2] * y[0] + x[1] * y[3] + x[3] * y[1]) % 2
        pts = _proj_points(2, 4)
        return _geometry_from(pts, lambda x, y: B(x, y) == 0, 2, "W(3,2)")
    if kind in ("Qminus5", "Qminus5q") and q in (2, 3):
        def Q(x):
            f = x[4] * x[4] + x[4] * x[5] + x[5] * x[5] if q == 2 else x[4] * x[4] + x[5] * x[5]
            return (x[0] * x[1] + x[2] * x[3] + f) % q

        def Bq(x, y):
            s = tuple((a + b) % q for a, b in zip(x, y))
            return (Q(s) - Q(x) - Q(y)) % q

        pts = [p for p in _proj_points(q, 6) if Q(p) == 0]
        return _geometry_from(pts, lambda x, y: Bq(x, y) == 0, q, f"Q-(5,{q})")
    raise GeometryError(f"unsupported geometry {kind!r} with q={q}")


# ---------------------------------------------------------------- verification

def verify_gq(g: IncidenceGeometry, thick: bool = True) -> GQOrder:
    """Check the quadrangle axioms and return the order (s, t)."""
    N = g.incidence.astype(np.int64)
    if g.num_points == 0 or g.num_lines == 0:
        raise GeometryError("empty geometry")
    line_sizes = N.sum(axis=0)
    degrees = N.sum(axis=1)
    if len(set(line_sizes.tolist())) != 1:
        j = int(np.flatnonzero(line_sizes != line_sizes[0])[0])
        raise GeometryError(f"line {j} has {line_sizes[j]} points, line 0 has {line_sizes[0]}")
    if len(set(degrees.tolist())) != 1:
        p = int(np.flatnonzero(degrees != degrees[0])[0])
        raise GeometryError(f"point {p} is on {degrees[p]} lines, point 0 on {degrees[0]}")
    s, t = int(line_sizes[0]) - 1, int(degrees[0]) - 1
    M = N @ N.T
    np.fill_diagonal(M, 0)
    bad = np.argwhere(M > 1)
    if len(bad):
        a, b = bad[0]
        raise GeometryError(f"points {a} and {b} lie on {M[a, b]} common lines")
    A = (M > 0).astype(np.int64)
    # for P not on l: number of points of l collinear with P must be exactly 1
    C = A @ N
    viol = np.argwhere((N == 0) & (C != 1))
    if len(viol):
        p, l = viol[0]
        raise GeometryError(f"point {p} and line {l}: {C[p, l]} points of the line collinear with the point")
    if thick and (s < 2 or t < 2):
        raise GeometryError(f"not thick: order ({s}, {t})")
    return GQOrder(s, t)


def srg_params(g: IncidenceGeometry) -> tuple[int, int, int, int]:
    """Parameters (v, k, lambda, mu) of the collinearity graph, checked exhaustively."""
    A = (g.collinearity() > 0).astype(np.int64)
    v = A.shape[0]
    deg = A.sum(axis=1)
    if len(set(deg.tolist())) != 1:
        raise GeometryError("collinearity graph is not regular")
    A2 = A @ A
    off = ~np.eye(v, dtype=bool)
    lam = set(A2[(A == 1) & off].tolist())
    mu = set(A2[(A == 0) & off].tolist())
    if len(lam) > 1 or len(mu) > 1:
        raise GeometryError("collinearity graph is not strongly regular")
    return v, int(deg[0]), lam.pop() if lam else 0, mu.pop() if mu else 0


# ---------------------------------------------------------------- collineations

@dataclass(frozen=True)
class Collineation:
    point_perm: Permutation
    line_perm: Permutation


def induced_line_perm(g: IncidenceGeometry, p: Permutation) -> Permutation:
    img = []
    for j, l in enumerate(g.lines):
        k = g.line_index(p.images[x] for x in l)
        if k is None:
            raise GeometryError(f"point permutation sends line {j} to a non-line")
        img.append(k)
    return Permutation(tuple(img))


def collineation(g: IncidenceGeometry, p: Permutation) -> Collineation:
    if p.degree != g.num_points:
        raise GeometryError("permutation degree differs from the number of points")
    return Collineation(p, induced_line_perm(g, p))


def _incidence_graph(g: IncidenceGeometry) -> tuple[csr_matrix, np.ndarray]:
    N = csr_matrix(g.incidence.astype(np.int64))
    adj = bmat([[None, N], [N.T, None]]).tocsr()
    colours = np.array([0] * g.num_points + [1] * g.num_lines)
    return adj, colours


def automorphism_group(g: IncidenceGeometry, point_limit: int = DEFAULT_POINT_LIMIT) -> PermGroup:
    """Full collineation group, acting on points."""
    if g.num_points > point_limit:
        raise GeometryError(f"{g.num_points} points exceeds the limit {point_limit}")
    adj, colours = _incidence_graph(g)
    gens = automorphism_generators(adj, colours)
    perms = [Permutation.from_array(x[: g.num_points]) for x in gens]
    for p in perms:
        induced_line_perm(g, p)  # independent re-check: lines go to lines
    if not perms:
        perms = [Permutation.identity(g.num_points)]
    return build_bsgs(perms)


# ---------------------------------------------------------------- substructures

class Case(str, Enum):
    EMPTY = "Empty"
    OVOID_LIKE = "Ovoid-like (ii)"
    ON_ONE_LINE = "OnOneLine (iii)"
    STAR_OF_POINT = "StarOfPoint (iv)"
    GRID = "Grid (v)"
    DUAL_GRID = "DualGrid (vi)"
    SUB_GQ = "SubGQ (vii)"


PRECEDENCE = [Case.SUB_GQ, Case.GRID, Case.DUAL_GRID, Case.STAR_OF_POINT,
              Case.ON_ONE_LINE, Case.OVOID_LIKE, Case.EMPTY]


@dataclass(frozen=True)
class SubstructureClass:
    case: Case
    fixed_points: int
    fixed_lines: int
    applicable: tuple[Case, ...]
    sub_order: GQOrder | None = None
    grid_params: tuple[int, int] | None = None
    bounds_hold: bool = True


def _two_colour(nodes: list[int], adj: dict[int, set[int]]) -> dict[int, int] | None:
    col: dict[int, int] = {}
    for start in nodes:
        if start in col:
            continue
        col[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in col:
                    col[y] = 1 - col[x]
                    stack.append(y)
                elif col[y] == col[x]:
                    return None
    return col


def _is_grid(P: list[int], lines: dict[int, list[int]]) -> tuple[int, int] | None:
    if not lines:
        return None
    on = Counter(p for pts in lines.values() for p in pts)
    if any(on[p] != 2 for p in P):
        return None
    ids = list(lines)
    meet = {a: {b for b in ids if b != a and set(lines[a]) & set(lines[b])} for a in ids}
    col = _two_colour(ids, meet)
    if col is None:
        return None
    A = [a for a in ids if col[a] == 0]
    B = [b for b in ids if col[b] == 1]
    if not A or not B or any(len(set(lines[a]) & set(lines[b])) != 1 for a in A for b in B):
        return None
    if len(P) != len(A) * len(B):
        return None
    return len(A) - 1, len(B) - 1


def _is_dual_grid(P: list[int], lines: dict[int, list[int]]) -> tuple[int, int] | None:
    if not lines or any(len(pts) != 2 for pts in lines.values()):
        return None
    adj: dict[int, set[int]] = {p: set() for p in P}
    for a, b in lines.values():
        adj[a].add(b)
        adj[b].add(a)
    col = _two_colour(P, adj)
    if col is None:
        return None
    X = [p for p in P if col[p] == 0]
    Y = [p for p in P if col[p] == 1]
    pairs = {frozenset(v) for v in lines.values()}
    if not X or not Y or len(pairs) != len(lines) or len(pairs) != len(X) * len(Y):
        return None
    return len(X) - 1, len(Y) - 1


def fixed_substructure(g: IncidenceGeometry, c: Collineation, order: GQOrder | None = None) -> SubstructureClass:
    """Fixed points and lines of a collineation, classified by the substructure taxonomy."""
    order = order or verify_gq(g)
    s, t = order.s, order.t
    p, lp = c.point_perm, c.line_perm
    if induced_line_perm(g, p) != lp:
        raise GeometryError("line permutation is not induced by the point permutation")
    if p.is_identity():
        raise GeometryError("the identity collineation has no proper fixed substructure")
    P = [i for i in range(g.num_points) if p.images[i] == i]
    Lf = [j for j in range(g.num_lines) if lp.images[j] == j]
    Pset = set(P)
    lines = {j: [x for x in g.lines[j] if x in Pset] for j in Lf}
    A = g.collinearity() > 0

    applicable: list[Case] = []
    sub_order = grid = None
    if not P:
        applicable.append(Case.EMPTY)
    else:
        if not Lf and not any(A[a, b] for a in P for b in P if a < b):
            applicable.append(Case.OVOID_LIKE)
        if any(Pset <= set(l) for l in g.lines):
            applicable.append(Case.ON_ONE_LINE)
        if any(all(x == y or A[x, y] for y in P) for x in P):
            applicable.append(Case.STAR_OF_POINT)
        grid = _is_grid(P, lines)
        if grid:
            applicable.append(Case.GRID)
        dgrid = _is_dual_grid(P, lines)
        if dgrid:
            applicable.append(Case.DUAL_GRID)
            grid = grid or dgrid
        if Lf and all(len(v) >= 2 for v in lines.values()):
            idx = {x: i for i, x in enumerate(P)}
            sub = IncidenceGeometry(len(P), [tuple(idx[x] for x in v) for v in lines.values()])
            try:
                sub_order = verify_gq(sub)
                applicable.append(Case.SUB_GQ)
            except GeometryError:
                pass
    if not applicable:
        raise GeometryError("fixed substructure matches no case of the taxonomy")
    case = next(k for k in PRECEDENCE if k in applicable)
    n = len(P)
    bounds = {
        Case.EMPTY: n == 0,
        Case.OVOID_LIKE: n <= s * t + 1,
        Case.ON_ONE_LINE: n <= s + 1,
        Case.STAR_OF_POINT: n <= s * (t + 1) + 1,
        Case.GRID: (n == (s + 1) ** 2 and s <= t) or n < s * s,
        Case.DUAL_GRID: n <= 2 * (t + 1),
        Case.SUB_GQ: n <= (s + 1) * (t + 1),
    }
    ok = all(bounds[k] for k in applicable)
    return SubstructureClass(case, n, len(Lf), tuple(applicable), sub_order, grid, ok)


# ---------------------------------------------------------------- fixity

def fixity_profile(group: PermGroup, budget: int = DEFAULT_ENUM_BUDGET) -> dict[int, int]:
    """Fixed-point count -> number of group elements (identity included)."""
    tally = np.zeros(group.degree + 1, dtype=np.int64)
    ident = np.arange(group.degree)
    for _, block in group.iter_blocks(budget):
        tally += np.bincount((block == ident).sum(axis=1), minlength=group.degree + 1)
    return {k: int(v) for k, v in enumerate(tally) if v}


def find_fixing(group: PermGroup, count: int, budget: int = DEFAULT_ENUM_BUDGET) -> Permutation | None:
    """First element (in enumeration order) fixing exactly ``count`` points."""
    ident = np.arange(group.degree)
    for _, block in group.iter_blocks(budget):
        hits = np.flatnonzero((block == ident).sum(axis=1) == count)
        if len(hits):
            return Permutation.from_array(block[hits[0]])
    return None


def write_dump(path: str | Path, g: IncidenceGeometry, order: GQOrder | None = None) -> None:
    Path(path).write_text(g.dump(order), encoding="ascii")
