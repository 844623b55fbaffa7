"""Distances, W-set partitions and distance-balance verdicts.

Everything here is a pure function of an immutable :class:`Graph`.  The
all-pairs :class:`DistanceMatrix` is cached on the graph, so repeated calls
on the same graph share one BFS pass.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

from .graphcore import Graph, _bits, bit_indices, complement

__all__ = [
    "INF",
    "DisconnectedGraphError",
    "DistanceMatrix",
    "WPartition",
    "Balance",
    "BalanceResult",
    "BalanceProfile",
    "JoinClass",
    "all_pairs_distances",
    "shells",
    "w_partition",
    "w_sizes",
    "is_l_distance_balanced",
    "balance_profile",
    "is_locally_regular",
    "prop_char_sums",
    "equal_degrees_at_distance",
    "join_decomposition",
    "classify_join_of_regulars",
]

INF = math.inf


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs geodesic distances.

    ``d[u][v]`` is an int, or :data:`INF` when ``v`` is unreachable from
    ``u``.  ``levels[x][k]`` is the bitset of vertices at distance exactly
    ``k`` from ``x``.
    """

    n: int
    d: tuple[tuple[float, ...], ...]
    levels: tuple[tuple[int, ...], ...]

    @classmethod
    def from_graph(cls, G: Graph) -> "DistanceMatrix":
        adj = G.adj
        n = G.n
        rows = []
        levels = []
        for s in range(n):
            seen = frontier = 1 << s
            lv = [frontier]
            row = [INF] * n
            row[s] = 0
            k = 0
            while True:
                nxt = 0
                for i in bit_indices(frontier):
                    nxt |= adj[i]
                nxt &= ~seen
                if not nxt:
                    break
                k += 1
                seen |= nxt
                lv.append(nxt)
                for i in bit_indices(nxt):
                    row[i] = k
                frontier = nxt
            rows.append(tuple(row))
            levels.append(tuple(lv))
        return cls(n, tuple(rows), tuple(levels))

    def __getitem__(self, uv):
        u, v = uv
        return self.d[u][v]

    @cached_property
    def connected(self) -> bool:
        return INF not in self.d[0]

    @cached_property
    def diameter(self) -> float:
        """Largest distance; :data:`INF` for a disconnected graph."""
        if not self.connected:
            return INF
        return max(len(lv) for lv in self.levels) - 1

    def eccentricity(self, x: int) -> float:
        if not self.connected:
            return INF
        return len(self.levels[x]) - 1

    @cached_property
    def balls(self) -> tuple[tuple[int, ...], ...]:
        """``balls[x][k]`` is the closed ball ``N_k[x]`` as a bitset."""
        out = []
        for lv in self.levels:
            acc = 0
            row = []
            for b in lv:
                acc |= b
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def ball(self, x: int, k: int) -> int:
        if k < 0:
            return 0
        row = self.balls[x]
        return row[k] if k < len(row) else row[-1]

    def shell(self, x: int, k: int) -> int:
        lv = self.levels[x]
        return lv[k] if 0 <= k < len(lv) else 0

    @cached_property
    def pairs_by_distance(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {}
        n = self.n
        for u, row in enumerate(self.d):
            for v in range(u + 1, n):
                k = row[v]
                if k in out:
                    out[k].append((u, v))
                elif k != INF:
                    out[k] = [(u, v)]
        return dict(sorted(out.items()))

    def pairs_at(self, l: int) -> list[tuple[int, int]]:
        """Pairs ``(u, v)``, ``u < v``, at distance exactly ``l``, lexicographic order."""
        return self.pairs_by_distance.get(l, [])


def all_pairs_distances(G: Graph) -> DistanceMatrix:
    return G.distances


def _connected_distances(G: Graph, D: DistanceMatrix | None) -> DistanceMatrix:
    D = G.distances if D is None else D
    if not D.connected:
        raise DisconnectedGraphError("graph is not connected")
    return D


def shells(G: Graph, x: int, D: DistanceMatrix | None = None) -> list[frozenset[int]]:
    """Distance shells ``N_0(x), N_1(x), ...`` of the component of ``x``."""
    D = G.distances if D is None else D
    if not 0 <= x < G.n:
        raise IndexError(f"vertex {x} out of range")
    return [frozenset(_bits(b)) for b in D.levels[x]]


@dataclass(frozen=True)
class WPartition:
    u: int
    v: int
    closer_u: frozenset[int]
    equidistant: frozenset[int]
    closer_v: frozenset[int]

    @property
    def sizes(self) -> tuple[int, int, int]:
        return len(self.closer_u), len(self.equidistant), len(self.closer_v)


def _check_pair(G, D, u, v):
    if not (0 <= u < G.n and 0 <= v < G.n):
        raise IndexError(f"vertex pair ({u}, {v}) out of range")
    if u == v:
        raise ValueError("W-sets need two distinct vertices")
    if D.d[u][v] == INF:
        raise DisconnectedGraphError(f"vertices {u} and {v} lie in different components")


def w_partition(G: Graph, u: int, v: int, D: DistanceMatrix | None = None) -> WPartition:
    """Split ``V(G)`` into vertices closer to ``u``, equidistant, closer to ``v``."""
    D = G.distances if D is None else D
    _check_pair(G, D, u, v)
    du, dv = D.d[u], D.d[v]
    cu, eq, cv = [], [], []
    for x in range(G.n):
        a, b = du[x], dv[x]
        (cu if a < b else cv if b < a else eq).append(x)
    return WPartition(u, v, frozenset(cu), frozenset(eq), frozenset(cv))


def w_sizes(D: DistanceMatrix, u: int, v: int) -> tuple[int, int]:
    """``(|W_uv|, |W_vu|)`` straight from the distance rows."""
    du, dv = D.d[u], D.d[v]
    wu = wv = 0
    for a, b in zip(du, dv):
        if a < b:
            wu += 1
        elif b < a:
            wv += 1
    return wu, wv


class Balance(str, enum.Enum):
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class BalanceResult:
    l: int
    status: Balance
    witness: tuple[int, int] | None = None
    witness_sizes: tuple[int, int] | None = None

    @property
    def balanced(self) -> bool:
        return self.status is Balance.BALANCED

    @property
    def applicable(self) -> bool:
        return self.status is not Balance.NOT_APPLICABLE


def is_l_distance_balanced(G: Graph, l: int, D: DistanceMatrix | None = None) -> BalanceResult:
    """Decide whether every pair at distance ``l`` has ``|W_uv| = |W_vu|``.

    ``l`` outside ``[1, diam(G)]`` gives ``Balance.NOT_APPLICABLE`` rather
    than a vacuous yes.  An unbalanced verdict carries the lexicographically
    first failing pair.
    """
    D = _connected_distances(G, D)
    if not 1 <= l <= D.diameter:
        return BalanceResult(l, Balance.NOT_APPLICABLE)
    for u, v in D.pairs_at(l):
        wu, wv = w_sizes(D, u, v)
        if wu != wv:
            return BalanceResult(l, Balance.UNBALANCED, (u, v), (wu, wv))
    return BalanceResult(l, Balance.BALANCED)


@dataclass(frozen=True)
class BalanceProfile:
    diam: int
    verdicts: dict[int, BalanceResult]

    @property
    def highly_balanced(self) -> bool:
        return all(r.balanced for r in self.verdicts.values())

    def flags(self) -> dict[int, bool]:
        return {l: r.balanced for l, r in self.verdicts.items()}

    def __str__(self):
        return "(" + ", ".join(f"{l}:{'yes' if r.balanced else 'no'}" for l, r in self.verdicts.items()) + ")"


def balance_profile(G: Graph, D: DistanceMatrix | None = None) -> BalanceProfile:
    D = _connected_distances(G, D)
    diam = int(D.diameter)
    return BalanceProfile(diam, {l: is_l_distance_balanced(G, l, D) for l in range(1, diam + 1)})


def is_locally_regular(G: Graph) -> tuple[bool, tuple[int, int] | None]:
    """True iff non-adjacent vertices all share a degree.

    Returns ``(verdict, witness)`` where the witness is the first
    non-adjacent pair ``u < v`` with different degrees.
    """
    deg = G.degrees
    for u in range(G.n):
        non = G.full_mask & ~G.adj[u] & ~((1 << (u + 1)) - 1)
        for v in _bits(non):
            if deg[u] != deg[v]:
                return False, (u, v)
    return True, None


def prop_char_sums(G: Graph, a: int, b: int, D: DistanceMatrix | None = None) -> tuple[int, int]:
    """Shell sums ``sum_{k=1}^{d-1} |N_k(a) - N_{k-1}[b]|`` and the same with a, b swapped.

    ``d`` is the diameter of ``G``.
    """
    D = _connected_distances(G, D)
    if a == b:
        raise ValueError("shell sums need two distinct vertices")
    d = int(D.diameter)
    la, lb = D.levels[a], D.levels[b]
    ba, bb = D.balls[a], D.balls[b]
    lhs = rhs = 0
    for k in range(1, d):
        if k < len(la):
            lhs += (la[k] & ~bb[min(k - 1, len(bb) - 1)]).bit_count()
        if k < len(lb):
            rhs += (lb[k] & ~ba[min(k - 1, len(ba) - 1)]).bit_count()
    return lhs, rhs


def equal_degrees_at_distance(G: Graph, l: int, D: DistanceMatrix | None = None) -> tuple[bool, tuple[int, int] | None]:
    """Whether every pair at distance ``l`` has equal degrees, with the first offender."""
    D = G.distances if D is None else D
    deg = G.degrees
    for u, v in D.pairs_at(l):
        if deg[u] != deg[v]:
            return False, (u, v)
    return True, None


class JoinClass(str, enum.Enum):
    REGULAR = "regular"
    JOIN_OF_REGULARS = "nonregular-join-of-regulars"
    NEITHER = "neither"


def join_decomposition(G: Graph) -> list[list[int]]:
    """Finest join factors: vertex sets of the components of the complement."""
    return complement(G).components()


def classify_join_of_regulars(G: Graph) -> JoinClass:
    if G.is_regular():
        return JoinClass.REGULAR
    parts = join_decomposition(G)
    if len(parts) >= 2 and all(G.induced_subgraph(p).is_regular() for p in parts):
        return JoinClass.JOIN_OF_REGULARS
    return JoinClass.NEITHER
