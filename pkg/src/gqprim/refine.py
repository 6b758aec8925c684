"""Automorphisms of a vertex-coloured graph by individualisation-refinement.

The search walks one fixed "left" path of individualised vertices and, for
each level, tries to map the left vertex onto every other vertex of its cell
that is not yet known to lie in the same orbit.  Colour refinement is
canonical (new colours are ranks of sorted signatures) so equal refinement
traces on both sides are necessary for an automorphism; leaves are checked
exactly.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix


class Refiner:
    def __init__(self, adj: csr_matrix, colours: np.ndarray):
        self.adj = adj.tocsr().astype(np.int64)
        self.n = adj.shape[0]
        self.initial = _rank(colours[:, None])
        rows, cols = self.adj.nonzero()
        self._rows, self._cols = rows, cols

    def refine(self, colours: np.ndarray) -> tuple[np.ndarray, tuple]:
        """Equitable refinement and a trace of cell counts per round."""
        trace = []
        k = int(colours.max()) + 1
        while True:
            onehot = np.zeros((self.n, k), dtype=np.int64)
            onehot[np.arange(self.n), colours] = 1
            hist = self.adj @ onehot
            new = _rank(np.column_stack([colours, hist]))
            k_new = int(new.max()) + 1
            trace.append((k_new, tuple(np.bincount(new).tolist())))
            if k_new == k:
                return new, tuple(trace)
            colours, k = new, k_new

    @staticmethod
    def individualise(colours: np.ndarray, v: int) -> np.ndarray:
        flag = np.zeros_like(colours)
        flag[v] = 1
        return _rank(np.column_stack([colours, flag]))

    def is_automorphism(self, perm: np.ndarray) -> bool:
        if not np.array_equal(self.initial[perm], self.initial):
            return False
        return bool(np.all(self.adj[perm[self._rows], perm[self._cols]]))


def _rank(rows: np.ndarray) -> np.ndarray:
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _target_cell(colours: np.ndarray) -> int | None:
    counts = np.bincount(colours)
    big = np.flatnonzero(counts > 1)
    return int(big[0]) if len(big) else None


class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


def automorphism_generators(adj: csr_matrix, colours: np.ndarray) -> list[np.ndarray]:
    """Generators of the colour-preserving automorphism group of a graph."""
    R = Refiner(adj, colours)
    c0, _ = R.refine(R.initial)

    # left path: repeatedly individualise the smallest vertex of the first non-singleton cell
    path, parts = [], [c0]
    c = c0
    while (cell := _target_cell(c)) is not None:
        v = int(np.flatnonzero(c == cell).min())
        path.append(v)
        c, _ = R.refine(R.individualise(c, v))
        parts.append(c)
    left_leaf = c
    traces_left = _left_traces(R, parts, path)

    gens: list[np.ndarray] = []

    def search(level: int, colours_r: np.ndarray) -> np.ndarray | None:
        if level == len(path):
            perm = _leaf_map(left_leaf, colours_r)
            return perm if R.is_automorphism(perm) else None
        cell = _target_cell(colours_r)
        for w in np.flatnonzero(colours_r == cell):
            nxt, tr = R.refine(R.individualise(colours_r, int(w)))
            if tr != traces_left[level]:
                continue
            found = search(level + 1, nxt)
            if found is not None:
                return found
        return None

    # deepest level first, so stabiliser generators are known when moving up
    for level in range(len(path) - 1, -1, -1):
        uf = _UnionFind(R.n)
        stab = [g for g in gens if all(g[p] == p for p in path[:level])]
        for g in stab:
            for i in range(R.n):
                uf.union(i, int(g[i]))
        v = path[level]
        cell = int(parts[level][v])
        for w in np.flatnonzero(parts[level] == cell):
            w = int(w)
            if uf.find(w) == uf.find(v):
                continue
            nxt, tr = R.refine(R.individualise(parts[level], w))
            if tr != traces_left[level]:
                continue
            g = search(level + 1, nxt)
            if g is not None:
                gens.append(g)
                for i in range(R.n):
                    uf.union(i, int(g[i]))
    return gens


def _left_traces(R: Refiner, parts: list[np.ndarray], path: list[int]) -> list[tuple]:
    return [R.refine(R.individualise(parts[i], path[i]))[1] for i in range(len(path))]


def _leaf_map(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Vertex map sending the left discrete partition onto the right one."""
    inv_right = np.empty_like(right)
    inv_right[right] = np.arange(len(right))
    return inv_right[left]
