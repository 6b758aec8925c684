"""Permutation groups: Schreier-Sims, streamed enumeration, conjugacy classes.

Permutations act on the right.  An image array ``p`` sends point ``i`` to
``p[i]``, and the product "a then b" is the array ``b[a]``.

Every element of a group with base (b_0, ..., b_{k-1}) is uniquely
``u_{k-1} ... u_1 u_0`` (applied left to right) with ``u_l`` taken from the
level-l transversal.  The coordinates (c_0, ..., c_{k-1}) of the chosen
transversal entries, read as a mixed-radix number with c_0 most significant,
give each element a stable integer index.  Sifting recovers that index for a
whole block of permutations at once, which is how class maps are stored.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from math import lcm, prod
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

DEFAULT_ENUM_BUDGET = 1 << 28
BLOCK_ENTRIES = 1 << 23


class EnumerationRefused(RuntimeError):
    pass


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images must be a bijection on 0..degree-1")

    @classmethod
    def from_array(cls, a: Sequence[int]) -> "Permutation":
        return cls(tuple(int(x) for x in a))

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.intp)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """self then other."""
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return lcm(*self.cycle_type()) if self.degree else 1

    def fixed_points(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i == j)


def _inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


def _is_id(a: np.ndarray) -> bool:
    return bool(np.all(a == np.arange(len(a))))


@dataclass
class _Level:
    point: int
    gens: list[np.ndarray] = field(default_factory=list)
    orbit: list[int] = field(default_factory=list)
    trans: dict[int, np.ndarray] = field(default_factory=dict)
    done: set[tuple[int, int]] = field(default_factory=set)


class PermGroup:
    """A permutation group with a base and strong generating set."""

    def __init__(self, degree: int, generators: list[Permutation]):
        self.degree = degree
        self.generators = list(generators)
        self._levels: list[_Level] = []
        self._schreier_sims()
        self._freeze()

    # ----------------------------------------------------------- construction

    def _new_level(self, h: np.ndarray | None, gens: list[np.ndarray]) -> None:
        if h is None:
            # first base point: smallest point of a largest orbit of <gens>
            point = _largest_orbit_point(self.degree, gens)
        else:
            point = _longest_cycle_point(h)
        ident = np.arange(self.degree, dtype=np.intp)
        self._levels.append(_Level(point, [], [point], {point: ident}))

    def _strip(self, g: np.ndarray, start: int) -> tuple[np.ndarray, int]:
        for j in range(start, len(self._levels)):
            L = self._levels[j]
            b = int(g[L.point])
            u = L.trans.get(b)
            if u is None:
                return g, j
            g = _inv(u)[g]
        return g, len(self._levels)

    def _extend(self, g: np.ndarray, k: int) -> None:
        h, j = self._strip(g, k)
        if _is_id(h):
            return
        if j == len(self._levels):
            self._new_level(h, [])
        for l in range(j, k - 1, -1):
            self._levels[l].gens.append(h)
            self._close(l)

    def _close(self, l: int) -> None:
        L = self._levels[l]
        changed = True
        while changed:
            changed = False
            i = 0
            while i < len(L.orbit):
                b = L.orbit[i]
                for gi in range(len(L.gens)):
                    if (b, gi) in L.done:
                        continue
                    L.done.add((b, gi))
                    x = L.gens[gi]
                    ux = x[L.trans[b]]
                    c = int(x[b])
                    if c not in L.trans:
                        L.trans[c] = ux
                        L.orbit.append(c)
                        changed = True
                    else:
                        s = _inv(L.trans[c])[ux]
                        if not _is_id(s):
                            self._extend(s, l + 1)
                i += 1

    def _schreier_sims(self) -> None:
        gens = [g.array() for g in self.generators if not g.is_identity()]
        for g in self.generators:
            if g.degree != self.degree:
                raise ValueError("all generators must share the group degree")
        if not gens:
            return
        self._new_level(None, gens)
        for g in gens:
            self._extend(g, 0)

    def _freeze(self) -> None:
        dt = np.int16 if self.degree < 1 << 15 else np.int32
        self.dtype = dt
        self.base = [L.point for L in self._levels]
        self.orbit_sizes = [len(L.orbit) for L in self._levels]
        self._U = [np.stack([L.trans[b] for b in L.orbit]).astype(dt) for L in self._levels]
        self._Uinv = [np.stack([_inv(L.trans[b]) for b in L.orbit]).astype(dt) for L in self._levels]
        self._pos = []
        for L in self._levels:
            pos = np.full(self.degree, -1, dtype=np.int64)
            pos[L.orbit] = np.arange(len(L.orbit))
            self._pos.append(pos)
        self.strong_generators = [Permutation.from_array(g) for L in self._levels for g in L.gens]
        self.order = prod(self.orbit_sizes)
        # stride of coordinate l in the mixed-radix element index
        self._strides = [prod(self.orbit_sizes[l + 1:]) for l in range(len(self._levels))]

    # ------------------------------------------------------------------ queries

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return int(self.index_of(p.array()[None, :])[0]) >= 0

    def index_of(self, X: np.ndarray) -> np.ndarray:
        """Element indices of the rows of X (-1 for rows outside the group)."""
        X = np.asarray(X)
        n = X.shape[0]
        idx = np.zeros(n, dtype=np.int64)
        ok = np.ones(n, dtype=bool)
        rows = np.arange(n)
        for l, L in enumerate(self._levels):
            c = self._pos[l][X[:, L.point]]
            bad = c < 0
            ok &= ~bad
            c = np.where(bad, 0, c)
            idx += c * self._strides[l]
            X = self._Uinv[l][c[:, None], X]
        ok &= np.all(X == np.arange(self.degree), axis=1)
        idx[~ok] = -1
        del rows
        return idx

    def element(self, index: int) -> Permutation:
        if not 0 <= index < self.order:
            raise IndexError("element index out of range")
        g = np.arange(self.degree, dtype=np.intp)
        coords = []
        for s in self._strides:
            c, index = divmod(index, s)
            coords.append(c)
        for l in range(len(self._levels) - 1, -1, -1):
            g = self._U[l][coords[l]][g]
        return Permutation.from_array(g)

    def random_element(self, rng: np.random.Generator) -> Permutation:
        return self.element(int(rng.integers(self.order)))

    # -------------------------------------------------------------- enumeration

    def _check_budget(self, budget: int) -> None:
        if self.order > budget:
            raise EnumerationRefused(f"group order {self.order} exceeds enumeration budget {budget}")

    def _split_level(self) -> int:
        m = len(self._levels)
        while m > 0 and prod(self.orbit_sizes[m - 1:]) * self.degree <= BLOCK_ENTRIES:
            m -= 1
        return m

    def _tail_elements(self, m: int) -> np.ndarray:
        E = np.arange(self.degree, dtype=self.dtype)[None, :]
        for l in range(len(self._levels) - 1, m - 1, -1):
            E = self._U[l][:, E].reshape(-1, self.degree)
        return E

    def iter_blocks(self, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[tuple[int, np.ndarray]]:
        """Yield (first_index, rows) blocks covering the group in index order."""
        self._check_budget(budget)
        if not self._levels:
            yield 0, np.arange(self.degree, dtype=self.dtype)[None, :]
            return
        m = self._split_level()
        tail = self._tail_elements(m)
        for n, coords in enumerate(product(*(range(k) for k in self.orbit_sizes[:m]))):
            head = np.arange(self.degree, dtype=self.dtype)
            for l in range(m - 1, -1, -1):
                head = self._U[l][coords[l]][head]
            yield n * len(tail), head[tail]

    def enumerate(self, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[Permutation]:
        for _, block in self.iter_blocks(budget):
            for row in block:
                yield Permutation.from_array(row)

    def elements_array(self, budget: int = 1 << 22) -> np.ndarray:
        self._check_budget(budget)
        return np.concatenate([b for _, b in self.iter_blocks(budget)])


def _orbits(degree: int, gens: list[np.ndarray]) -> list[list[int]]:
    seen = np.zeros(degree, dtype=bool)
    out = []
    for p in range(degree):
        if seen[p]:
            continue
        orb, seen[p] = [p], True
        i = 0
        while i < len(orb):
            for g in gens:
                q = int(g[orb[i]])
                if not seen[q]:
                    seen[q] = True
                    orb.append(q)
            i += 1
        out.append(orb)
    return out


def _largest_orbit_point(degree: int, gens: list[np.ndarray]) -> int:
    best = max(_orbits(degree, gens), key=len)
    return min(best)


def _longest_cycle_point(h: np.ndarray) -> int:
    cyc = Permutation.from_array(h).cycles()
    best = max(cyc, key=len)
    return min(best)


def build_bsgs(gens: list[Permutation]) -> PermGroup:
    if not gens:
        raise ValueError("need at least one generator")
    deg = gens[0].degree
    return PermGroup(deg, gens)


def direct_product(g1: PermGroup, g2: PermGroup) -> PermGroup:
    """G1 x G2 acting on disjoint point sets (degree d1 + d2)."""
    d1, d2 = g1.degree, g2.degree
    gens = [Permutation(g.images + tuple(range(d1, d1 + d2))) for g in g1.generators]
    gens += [Permutation(tuple(range(d1)) + tuple(d1 + i for i in g.images)) for g in g2.generators]
    return PermGroup(d1 + d2, gens)


# ------------------------------------------------------------ conjugacy classes

@dataclass
class ClassData:
    group: PermGroup
    group_order: int
    class_id: np.ndarray            # element index -> class id
    reps: list[int]                 # class id -> element index of a representative
    sizes: list[int]
    identity_class: int

    @property
    def classes(self) -> list[tuple[Permutation, int]]:
        return [(self.group.element(r), s) for r, s in zip(self.reps, self.sizes)]

    def class_sizes(self) -> list[int]:
        return list(self.sizes)

    def representative(self, c: int) -> Permutation:
        return self.group.element(self.reps[c])

    def class_of(self, p: Permutation) -> int:
        i = int(self.group.index_of(p.array()[None, :])[0])
        if i < 0:
            raise ValueError("permutation is not in the group")
        return int(self.class_id[i])

    def classes_of(self, X: np.ndarray) -> np.ndarray:
        idx = self.group.index_of(X)
        if np.any(idx < 0):
            raise ValueError("some rows are not in the group")
        return self.class_id[idx]

    def element_orders(self) -> list[int]:
        return [self.representative(c).order() for c in range(len(self.sizes))]

    def order_counts(self) -> dict[int, int]:
        out: Counter[int] = Counter()
        for o, s in zip(self.element_orders(), self.sizes):
            out[o] += s
        return dict(sorted(out.items()))


def conjugacy_classes(g: PermGroup, budget: int = DEFAULT_ENUM_BUDGET) -> ClassData:
    """Classes as orbits of the conjugation action of the generators."""
    n = g.order
    g._check_budget(budget)
    gens = [x.array().astype(g.dtype) for x in g.generators if not x.is_identity()]
    srcs, dsts = [], []
    for start, block in g.iter_blocks(budget):
        ids = np.arange(start, start + len(block))
        for x in gens:
            xinv = _inv(x)
            # x^-1 then y then x
            conj = x[block[:, xinv]]
            srcs.append(ids)
            dsts.append(g.index_of(conj))
    if srcs:
        src, dst = np.concatenate(srcs), np.concatenate(dsts)
        assert np.all(dst >= 0)
        adj = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
        _, labels = connected_components(adj, directed=True, connection="weak")
    else:
        labels = np.zeros(n, dtype=np.int64)
    # relabel classes by first occurrence so that ids are deterministic
    _, first = np.unique(labels, return_index=True)
    order_ = np.argsort(first)
    relabel = np.empty(len(first), dtype=np.int64)
    relabel[order_] = np.arange(len(first))
    class_id = relabel[labels].astype(np.int32)
    reps = sorted(first.tolist())
    sizes = np.bincount(class_id).tolist()
    ident = int(class_id[int(g.index_of(np.arange(g.degree)[None, :])[0])])
    return ClassData(g, n, class_id, [int(r) for r in reps], [int(s) for s in sizes], ident)


def conjugacy_orbit(g: PermGroup, x: Permutation, limit: int = 1 << 20) -> set[Permutation]:
    """The class of x, by closing under conjugation by the generators."""
    gens = [(h, h.inverse()) for h in g.generators if not h.is_identity()]
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for y in frontier:
            for h, hinv in gens:
                z = hinv * y * h
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        if len(seen) > limit:
            raise EnumerationRefused(f"conjugacy class exceeds {limit} elements")
        frontier = nxt
    return seen


def product_class_sizes(cd: ClassData, r: int) -> Counter:
    """Class sizes of T^r as a multiset {size: multiplicity}."""
    if r < 1:
        raise ValueError("r must be positive")
    out: Counter = Counter()
    for combo in product(cd.sizes, repeat=r):
        out[prod(combo)] += 1
    return out


# ------------------------------------------------------------ generator files

def read_generators(path: str | Path) -> list[Permutation]:
    lines = [ln.split() for ln in Path(path).read_text(encoding="ascii").splitlines() if ln.strip()]
    degree = int(lines[0][0])
    gens = []
    for row in lines[1:]:
        if len(row) != degree:
            raise ValueError(f"{path}: permutation of length {len(row)}, expected {degree}")
        gens.append(Permutation(tuple(int(x) for x in row)))
    return gens


def write_generators(path: str | Path, gens: list[Permutation]) -> None:
    degree = gens[0].degree
    body = "\n".join(" ".join(map(str, g.images)) for g in gens)
    Path(path).write_text(f"{degree}\n{body}\n", encoding="ascii")


def embedded_group(name: str) -> PermGroup:
    """Group from ``data/generators/<name>.txt``."""
    from .groups import data_dir

    return build_bsgs(read_generators(data_dir() / "generators" / f"{name}.txt"))


def symmetric_group(n: int) -> PermGroup:
    gens = [Permutation.from_cycles(n, [tuple(range(n))])]
    if n > 1:
        gens.append(Permutation.from_cycles(n, [(0, 1)]))
    return build_bsgs(gens)


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return build_bsgs([Permutation.identity(n)])
    gens = [Permutation.from_cycles(n, [(i, i + 1, i + 2)]) for i in range(n - 2)]
    return build_bsgs(gens)


def cyclic_group(n: int) -> PermGroup:
    return build_bsgs([Permutation.from_cycles(n, [tuple(range(n))])])
