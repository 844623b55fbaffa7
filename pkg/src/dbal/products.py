"""Cartesian, lexicographic and corona products, plus the counting
conditions that decide their distance balance.

Flat vertex indexing:

* cartesian / lexicographic: ``(g, h) -> g * |V(H)| + h``
* corona: root ``(g, ROOT) -> g`` and ``(g, h) -> |V(G)| + g * |V(H)| + h``
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .graphcore import Graph, _bits
from .metrics import INF, DistanceMatrix, w_sizes

__all__ = [
    "ROOT",
    "ProductVertex",
    "ProductGraph",
    "FivePartition",
    "Membership",
    "cartesian",
    "lexicographic",
    "corona",
    "cartesian_distance",
    "lexicographic_distance",
    "corona_distance",
    "formula_distances",
    "check_distance_formula",
    "lex_w_count",
    "cart_membership",
    "cart_membership_table",
    "eq3_counts",
    "corona_condition_iii",
    "distance_partition_five",
]

ROOT = None  # second coordinate of a corona's copy-of-G vertex


class ProductVertex(NamedTuple):
    g: int
    h: int | None


@dataclass(frozen=True, eq=False)
class ProductGraph:
    graph: Graph
    kind: str
    G: Graph
    H: Graph

    def index(self, g: int, h: int | None) -> int:
        if not 0 <= g < self.G.n:
            raise IndexError(f"first coordinate {g} out of range")
        if h is ROOT:
            if self.kind != "corona":
                raise ValueError("ROOT vertices exist only in corona products")
            return g
        if not 0 <= h < self.H.n:
            raise IndexError(f"second coordinate {h} out of range")
        if self.kind == "corona":
            return self.G.n + g * self.H.n + h
        return g * self.H.n + h

    def vertex(self, i: int) -> ProductVertex:
        m = self.H.n
        if self.kind == "corona":
            if i < self.G.n:
                return ProductVertex(i, ROOT)
            g, h = divmod(i - self.G.n, m)
            return ProductVertex(g, h)
        g, h = divmod(i, m)
        return ProductVertex(g, h)

    def layer(self, g: int) -> list[int]:
        """Flat indices of the H-layer over ``g`` (excluding a corona root)."""
        return [self.index(g, h) for h in range(self.H.n)]

    def cross_layer(self, h: int) -> list[int]:
        """Flat indices of the G-layer over ``h`` (for ``h = ROOT``, the corona's copy of G)."""
        return [self.index(g, h) for g in range(self.G.n)]

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Per flat index: first coordinate, and second coordinate with -1 for ROOT."""
        gs, hs = [], []
        for i in range(self.graph.n):
            g, h = self.vertex(i)
            gs.append(g)
            hs.append(-1 if h is ROOT else h)
        return np.array(gs), np.array(hs)


def cartesian(G: Graph, H: Graph) -> ProductGraph:
    n, m = G.n, H.n
    adj = []
    for g in range(n):
        nbrs = G.neighbors(g)
        for h in range(m):
            a = H.adj[h] << (g * m)
            for g2 in nbrs:
                a |= 1 << (g2 * m + h)
            adj.append(a)
    return ProductGraph(Graph(n * m, tuple(adj)), "cartesian", G, H)


def lexicographic(G: Graph, H: Graph) -> ProductGraph:
    n, m = G.n, H.n
    block = (1 << m) - 1
    adj = []
    for g in range(n):
        across = 0
        for g2 in _bits(G.adj[g]):
            across |= block << (g2 * m)
        adj.extend((H.adj[h] << (g * m)) | across for h in range(m))
    return ProductGraph(Graph(n * m, tuple(adj)), "lexicographic", G, H)


def corona(G: Graph, H: Graph) -> ProductGraph:
    n, m = G.n, H.n
    block = (1 << m) - 1
    adj = [G.adj[g] | (block << (n + g * m)) for g in range(n)]
    for g in range(n):
        off = n + g * m
        adj.extend((H.adj[h] << off) | (1 << g) for h in range(m))
    return ProductGraph(Graph(n * (m + 1), tuple(adj)), "corona", G, H)


# --- closed-form distances ---------------------------------------------------


def cartesian_distance(DG: DistanceMatrix, DH: DistanceMatrix, x, y) -> float:
    (g1, h1), (g2, h2) = x, y
    return DG.d[g1][g2] + DH.d[h1][h2]


def lexicographic_distance(DG: DistanceMatrix, H: Graph, x, y) -> float:
    """Distance in ``G[H]``; valid for connected ``G`` with at least two vertices."""
    (g1, h1), (g2, h2) = x, y
    if g1 != g2:
        return DG.d[g1][g2]
    if h1 == h2:
        return 0
    return 1 if H.has_edge(h1, h2) else 2


def corona_distance(DG: DistanceMatrix, H: Graph, x, y) -> float:
    (g1, h1), (g2, h2) = x, y
    if g1 != g2:
        return DG.d[g1][g2] + (h1 is not ROOT) + (h2 is not ROOT)
    if h1 == h2:
        return 0
    if h1 is ROOT or h2 is ROOT or H.has_edge(h1, h2):
        return 1
    return 2


def _adj_matrix(H: Graph) -> np.ndarray:
    return np.array([[H.adj[i] >> j & 1 for j in range(H.n)] for i in range(H.n)], dtype=bool)


def formula_distances(pg: ProductGraph) -> np.ndarray:
    """Distance matrix of the product from the factor distances alone."""
    DG = np.array(pg.G.distances.d, dtype=float)
    gs, hs = pg.coords
    gi, gj = gs[:, None], gs[None, :]
    hi, hj = hs[:, None], hs[None, :]
    same = np.eye(len(gs), dtype=bool)
    if pg.kind == "cartesian":
        DH = np.array(pg.H.distances.d, dtype=float)
        return DG[gi, gj] + DH[hi, hj]
    A = _adj_matrix(pg.H)
    if pg.kind == "lexicographic":
        inner = np.where(same, 0, np.where(A[hi, hj], 1, 2))
        return np.where(gi != gj, DG[gi, gj], inner)
    root = hs < 0
    hh = np.where(root, 0, hs)
    near = root[:, None] | root[None, :] | A[hh[:, None], hh[None, :]]
    inner = np.where(same, 0, np.where(near, 1, 2))
    lift = (~root[:, None]).astype(float) + (~root[None, :]).astype(float)
    return np.where(gi != gj, DG[gi, gj] + lift, inner)


def check_distance_formula(pg: ProductGraph):
    """First ``(i, j, bfs, formula)`` disagreement between BFS and the closed form, else None."""
    bfs = np.array(pg.graph.distances.d, dtype=float)
    want = formula_distances(pg)
    bad = np.argwhere(bfs != want)
    if len(bad) == 0:
        return None
    i, j = (int(t) for t in bad[0])
    return i, j, float(bfs[i, j]), float(want[i, j])


# --- counting conditions -----------------------------------------------------


def lex_w_count(G: Graph, H: Graph, g1: int, g2: int, DG: DistanceMatrix | None = None) -> int:
    """``|W_xy|`` in ``G[H]`` for ``x, y`` over ``g1, g2`` at distance at least 3."""
    DG = G.distances if DG is None else DG
    d = DG.d[g1][g2]
    if d == INF or d < 3:
        raise ValueError(f"count identity needs d_G(g1, g2) >= 3, got {d}")
    return w_sizes(DG, g1, g2)[0] * H.n


class Membership(str, enum.Enum):
    CLOSER_X = "W_xy"
    EQUIDISTANT = "equidistant"
    CLOSER_Y = "W_yx"


def _closer_x(g1, g2, g, a, b):
    # z=(g,h) in W_xy with a = d_H(h1,h), b = d_H(h2,h), layer rules of K_n box H
    if g1 == g2:
        return a < b
    if g == g1:
        return a <= b
    if g == g2:
        return a < b and a != b - 1
    return a < b


def cart_membership(n: int, H: Graph, x, y, z, DH: DistanceMatrix | None = None) -> Membership:
    """Classify ``z`` against the pair ``x, y`` of ``K_n box H`` from H-distances and layers only."""
    DH = H.distances if DH is None else DH
    for p in (x, y, z):
        g, h = p
        if not (0 <= g < n and h is not None and 0 <= h < H.n):
            raise ValueError(f"malformed product vertex {p!r}")
    if tuple(x) == tuple(y):
        raise ValueError("x and y must differ")
    (g1, h1), (g2, h2), (g, h) = x, y, z
    a, b = DH.d[h1][h], DH.d[h2][h]
    if _closer_x(g1, g2, g, a, b):
        return Membership.CLOSER_X
    if _closer_x(g2, g1, g, b, a):
        return Membership.CLOSER_Y
    return Membership.EQUIDISTANT


def cart_membership_table(n: int, H: Graph, DH: DistanceMatrix | None = None) -> np.ndarray:
    """Layer-rule classification of every triple of ``K_n box H`` at once.

    Entry ``[x, y, z]`` is +1 for ``z`` in ``W_xy``, -1 for ``W_yx`` and 0
    when equidistant (diagonal ``x == y`` is 0).
    """
    DH = H.distances if DH is None else DH
    m = H.n
    D = np.array(DH.d, dtype=float)
    A = D[:, None, :]  # [h1, h2, h] -> d(h1, h)
    B = D[None, :, :]  # [h1, h2, h] -> d(h2, h)
    rules = {
        "same": (A < B, B < A),
        "first": (A <= B, (B < A) & (B != A - 1)),
        "second": ((A < B) & (A != B - 1), B <= A),
        "other": (A < B, B < A),
    }
    blocks = {k: wx.astype(np.int8) - wy.astype(np.int8) for k, (wx, wy) in rules.items()}
    N = n * m
    out = np.zeros((N, N, N), dtype=np.int8)
    for g1 in range(n):
        for g2 in range(n):
            for g in range(n):
                if g1 == g2:
                    key = "same"
                elif g == g1:
                    key = "first"
                elif g == g2:
                    key = "second"
                else:
                    key = "other"
                out[g1 * m:(g1 + 1) * m, g2 * m:(g2 + 1) * m, g * m:(g + 1) * m] = blocks[key]
    idx = np.arange(N)
    out[idx, idx, :] = 0
    return out


def eq3_counts(H: Graph, h1: int, h2: int, DH: DistanceMatrix | None = None) -> tuple[int, int]:
    """Counts of ``h`` in ``W_h1h2`` with ``d(h1,h) = d(h2,h) - 1``, and the mirror count."""
    DH = H.distances if DH is None else DH
    left = right = 0
    for a, b in zip(DH.d[h1], DH.d[h2]):
        if a < b and a == b - 1:
            left += 1
        elif b < a and b == a - 1:
            right += 1
    return left, right


def corona_condition_iii(G: Graph, g1: int, g2: int, DG: DistanceMatrix | None = None) -> tuple[int, int]:
    """``|{g: d(g1,g) + 2 <= d(g2,g)}|`` and ``|{g: d(g2,g) <= d(g1,g)}|``."""
    DG = G.distances if DG is None else DG
    left = right = 0
    for a, b in zip(DG.d[g1], DG.d[g2]):
        if a + 2 <= b:
            left += 1
        if b <= a:
            right += 1
    return left, right


@dataclass(frozen=True)
class FivePartition:
    u: int
    v: int
    U2: frozenset[int]
    U1: frozenset[int]
    E: frozenset[int]
    V1: frozenset[int]
    V2: frozenset[int]

    @property
    def sizes(self) -> tuple[int, int, int, int, int]:
        return len(self.U2), len(self.U1), len(self.E), len(self.V1), len(self.V2)


def distance_partition_five(X: Graph, u: int, v: int, D: DistanceMatrix | None = None) -> FivePartition:
    """Partition ``V(X)`` by the offset ``d(u,x) - d(v,x)``: <= -2, -1, 0, +1, >= +2."""
    D = X.distances if D is None else D
    duv = D.d[u][v]
    if duv == INF:
        raise ValueError(f"vertices {u} and {v} are not connected")
    if duv < 2:
        raise ValueError(f"five-set partition needs d(u, v) >= 2, got {duv}")
    sets = ([], [], [], [], [])
    for x, (a, b) in enumerate(zip(D.d[u], D.d[v])):
        off = a - b
        sets[0 if off <= -2 else 4 if off >= 2 else int(off) + 2].append(x)
    return FivePartition(u, v, *(frozenset(s) for s in sets))
