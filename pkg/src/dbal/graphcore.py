"""Simple undirected graphs stored as per-vertex bitsets.

Vertices are the integers ``0..n-1`` and ``adj[v]`` is an ``int`` whose bit
``u`` is set iff ``uv`` is an edge.  Besides construction this module holds
the standard families, complement/join, graph6 and edge-list I/O, and the
exhaustive enumeration of small labeled connected graphs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Graph",
    "GraphError",
    "build_graph",
    "generate",
    "FAMILIES",
    "complement",
    "join_graphs",
    "disjoint_union",
    "parse_graph6",
    "serialize_graph6",
    "read_graph6_lines",
    "parse_edge_list",
    "format_edge_list",
    "enumerate_connected",
    "enumerate_all",
    "edge_masks",
    "graph_from_mask",
    "MAX_ENUM_N",
    "MAX_GRAPH6_N",
    "parse_shorthand",
    "parse_family_spec",
    "load_graphs",
]

MAX_ENUM_N = 7
MAX_GRAPH6_N = 62


class GraphError(ValueError):
    """Raised for invalid graph input (bad endpoints, malformed encodings...)."""


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


_SMALL = 1 << 10
_BIT_TABLE = [tuple(_bits(x)) for x in range(_SMALL)]


def bit_indices(x: int) -> tuple[int, ...]:
    """Set-bit positions of ``x`` in increasing order (table lookup for small masks)."""
    return _BIT_TABLE[x] if x < _SMALL else tuple(_bits(x))


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    Equality and hashing look at ``n`` and ``adj`` only; ``label`` is a
    free-form tag carried into reports.
    """

    n: int
    adj: tuple[int, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise GraphError(f"expected {self.n} adjacency sets, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for u, a in enumerate(self.adj):
            if a & ~full or a < 0:
                raise GraphError(f"vertex {u} has a neighbour outside 0..{self.n - 1}")
            if a >> u & 1:
                raise GraphError(f"self-loop at vertex {u}")
            for v in _bits(a):
                if not self.adj[v] >> u & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<Graph{tag} n={self.n} m={self.m}>"

    @cached_property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(a.bit_count() for a in self.adj)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def reach(self, source: int) -> int:
        """Bitset of the connected component containing ``source``."""
        adj = self.adj
        seen = frontier = 1 << source
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                nxt |= adj[low.bit_length() - 1]
                frontier ^= low
            frontier = nxt & ~seen
            seen |= frontier
        return seen

    def is_connected(self) -> bool:
        return self.reach(0) == self.full_mask

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        left = self.full_mask
        out = []
        while left:
            low = left & -left
            comp = self.reach(low.bit_length() - 1)
            out.append(list(_bits(comp)))
            left &= ~comp
        return out

    def is_regular(self) -> bool:
        return len(set(self.degrees)) <= 1

    def universal_vertices(self) -> list[int]:
        return [v for v, d in enumerate(self.degrees) if d == self.n - 1]

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced on ``vertices``, relabeled in ascending order."""
        vs = sorted(set(vertices))
        if not vs:
            raise GraphError("induced subgraph needs at least one vertex")
        pos = {v: i for i, v in enumerate(vs)}
        keep = sum(1 << v for v in vs)
        adj = tuple(sum(1 << pos[w] for w in _bits(self.adj[v] & keep)) for v in vs)
        return Graph(len(vs), adj)

    def delete_vertex(self, v: int) -> "Graph":
        return self.induced_subgraph(u for u in range(self.n) if u != v)

    def relabel(self, label: str | None) -> "Graph":
        return Graph(self.n, self.adj, label)

    @cached_property
    def distances(self):
        from .metrics import DistanceMatrix

        return DistanceMatrix.from_graph(self)

    @cached_property
    def graph6(self) -> str:
        return serialize_graph6(self)


def build_graph(n: int, edges: Iterable[Sequence[int]], label: str | None = None) -> Graph:
    """Graph on ``0..n-1`` with the given edges.

    Duplicate edges (in either orientation) collapse to one.

    >>> build_graph(3, [(0, 1), (1, 2), (0, 2)]).m
    3
    """
    if n < 1:
        raise GraphError("a graph needs at least one vertex")
    adj = [0] * n
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj), label)


# --- standard families -------------------------------------------------------


def _complete(n):
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)), f"K{n}")


def _empty(n):
    if n < 1:
        raise GraphError("empty graph needs n >= 1")
    return Graph(n, (0,) * n, f"E{n}")


def _path(n):
    if n < 1:
        raise GraphError("path needs n >= 1")
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def _cycle(n):
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def _star(n):
    # n counts all vertices: hub 0 plus n-1 leaves
    if n < 2:
        raise GraphError("star needs n >= 2 vertices")
    return build_graph(n, [(0, i) for i in range(1, n)], f"S{n}")


def _complete_bipartite(a, b):
    if a < 1 or b < 1:
        raise GraphError("complete bipartite graph needs both sides >= 1")
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)], f"K{a},{b}")


def _wheel(n):
    # n counts all vertices: hub 0 joined to a rim cycle on 1..n-1
    if n < 4:
        raise GraphError("wheel needs n >= 4 vertices")
    return join_graphs([_complete(1), _cycle(n - 1)]).relabel(f"W{n}")


FAMILIES = {
    "complete": (_complete, 1),
    "cycle": (_cycle, 1),
    "path": (_path, 1),
    "star": (_star, 1),
    "complete_bipartite": (_complete_bipartite, 2),
    "wheel": (_wheel, 1),
    "empty": (_empty, 1),
}
_ALIASES = {"cbip": "complete_bipartite", "k": "complete", "c": "cycle", "p": "path"}


def generate(family: str, *params: int) -> Graph:
    """Standard labeled member of ``family``.

    ``star(n)`` and ``wheel(n)`` take the total vertex count, so ``wheel(6)``
    is a hub joined to ``C5``.
    """
    name = _ALIASES.get(family, family)
    if name not in FAMILIES:
        raise GraphError(f"unknown graph family {family!r}")
    fn, arity = FAMILIES[name]
    if len(params) != arity:
        raise GraphError(f"family {name!r} takes {arity} parameter(s), got {len(params)}")
    return fn(*(int(p) for p in params))


# --- complement / join -------------------------------------------------------


def complement(G: Graph) -> Graph:
    full = G.full_mask
    return Graph(G.n, tuple(full & ~a & ~(1 << v) for v, a in enumerate(G.adj)))


def disjoint_union(parts: Sequence[Graph]) -> Graph:
    adj = []
    offset = 0
    for P in parts:
        adj.extend(a << offset for a in P.adj)
        offset += P.n
    return Graph(offset, tuple(adj))


def join_graphs(parts: Sequence[Graph]) -> Graph:
    """Disjoint union of ``parts`` plus every edge between distinct parts.

    Vertex blocks follow list order.
    """
    if not parts:
        raise GraphError("join needs at least one graph")
    total = sum(P.n for P in parts)
    full = (1 << total) - 1
    adj = []
    offset = 0
    for P in parts:
        block = ((1 << P.n) - 1) << offset
        outside = full & ~block
        adj.extend((a << offset) | outside for a in P.adj)
        offset += P.n
    return Graph(total, tuple(adj))


# --- graph6 ------------------------------------------------------------------


def _pair_order(n: int) -> list[tuple[int, int]]:
    # graph6 column order: x(0,1), x(0,2), x(1,2), x(0,3), ...
    return [(i, j) for j in range(1, n) for i in range(j)]


def serialize_graph6(G: Graph) -> str:
    """Short-form graph6 encoding (``n <= 62``), without header or newline."""
    if G.n > MAX_GRAPH6_N:
        raise GraphError(f"graph6 short form supports n <= {MAX_GRAPH6_N}, got {G.n}")
    bits = [G.adj[i] >> j & 1 for i, j in _pair_order(G.n)]
    bits.extend([0] * (-len(bits) % 6))
    out = [chr(63 + G.n)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(63 + v))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one short-form graph6 line.

    A leading ``>>graph6<<`` header and surrounding whitespace are ignored.
    """
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphError("empty graph6 string")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise GraphError(f"graph6 contains invalid character {ch!r}")
    n = ord(s[0]) - 63
    if n == 63:
        raise GraphError("graph6 long form (n > 62) is not supported")
    if n < 1:
        raise GraphError("graph6 encodes a graph with no vertices")
    pairs = _pair_order(n)
    need = -(-len(pairs) // 6)
    body = s[1:]
    if len(body) != need:
        raise GraphError(f"graph6 for n={n} needs {need} data bytes, got {len(body)}")
    adj = [0] * n
    k = 0
    for ch in body:
        v = ord(ch) - 63
        for shift in range(5, -1, -1):
            bit = v >> shift & 1
            if k < len(pairs):
                if bit:
                    i, j = pairs[k]
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
            elif bit:
                raise GraphError("graph6 has nonzero padding bits")
            k += 1
    return Graph(n, tuple(adj))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Graphs from graph6 lines; blank lines and ``#`` comments are skipped."""
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            yield parse_graph6(s)
        except GraphError as exc:
            raise GraphError(f"line {lineno}: {exc}") from None


# --- edge-list text ----------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphError("empty edge list")
    try:
        head = [int(t) for t in rows[0]]
        if len(head) != 2:
            raise GraphError("edge list header must be 'n m'")
        n, m = head
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"edge list header announces {m} edges, found {len(edges)}")
    return build_graph(n, edges)


def format_edge_list(G: Graph) -> str:
    es = G.edges()
    return "\n".join([f"{G.n} {len(es)}"] + [f"{u} {v}" for u, v in es]) + "\n"


# --- enumeration -------------------------------------------------------------


def edge_masks(n: int) -> list[tuple[int, int]]:
    """Bit ``k`` of an edge mask stands for ``edge_masks(n)[k]`` (graph6 column order)."""
    return _pair_order(n)


def graph_from_mask(n: int, mask: int) -> Graph:
    adj = [0] * n
    for k, (i, j) in enumerate(_pair_order(n)):
        if mask >> k & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return Graph(n, tuple(adj))


def _check_enum_n(n):
    if not 1 <= n <= MAX_ENUM_N:
        raise GraphError(f"enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")


def _iter_adj(n: int, lo: int, hi: int) -> Iterator[tuple[int, list[int]]]:
    # adjacency lists for masks in [lo, hi), updated incrementally
    pairs = _pair_order(n)
    adj = [0] * n
    prev = 0
    for mask in range(lo, hi):
        flip = mask ^ prev
        for k in _bits(flip):
            i, j = pairs[k]
            adj[i] ^= 1 << j
            adj[j] ^= 1 << i
        prev = mask
        yield mask, adj


def enumerate_all(n: int, lo: int = 0, hi: int | None = None) -> Iterator[Graph]:
    """Every labeled simple graph on ``n`` vertices, edge-mask ascending."""
    _check_enum_n(n)
    total = 1 << (n * (n - 1) // 2)
    hi = total if hi is None else min(hi, total)
    for _, adj in _iter_adj(n, lo, hi):
        yield Graph(n, tuple(adj))


def enumerate_connected(n: int, lo: int = 0, hi: int | None = None) -> Iterator[Graph]:
    """Every labeled connected graph on ``n`` vertices, each once, edge-mask ascending.

    ``lo``/``hi`` restrict the mask range, so the stream can be split into
    independent chunks.
    """
    _check_enum_n(n)
    total = 1 << (n * (n - 1) // 2)
    hi = total if hi is None else min(hi, total)
    full = (1 << n) - 1
    for _, adj in _iter_adj(n, lo, hi):
        # connectivity by bitset BFS from vertex 0
        seen = frontier = 1
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                nxt |= adj[low.bit_length() - 1]
                frontier ^= low
            frontier = nxt & ~seen
            seen |= frontier
        if seen == full:
            yield Graph(n, tuple(adj))


_SHORTHAND = re.compile(r"^(K|C|P|W|S|E)(\d+)(?:,(\d+))?$")


def parse_shorthand(text: str) -> Graph | None:
    """``K4``, ``C5``, ``P3``, ``W6``, ``S4``, ``E3`` or ``K2,3``; None if not shorthand."""
    m = _SHORTHAND.match(text.strip())
    if not m:
        return None
    letter, a, b = m.group(1), int(m.group(2)), m.group(3)
    if b is not None:
        if letter != "K":
            return None
        return generate("complete_bipartite", a, int(b))
    name = {"K": "complete", "C": "cycle", "P": "path", "W": "wheel", "S": "star", "E": "empty"}[letter]
    return generate(name, a)


def parse_family_spec(text: str) -> Graph:
    """``family:p1,p2`` such as ``cycle:7`` or ``cbip:2,3``."""
    name, _, rest = text.partition(":")
    try:
        params = [int(p) for p in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise GraphError(f"bad family parameters in {text!r}") from None
    return generate(name.strip(), *params)


def load_graphs(source: str) -> list[Graph]:
    """Resolve a graph source: a graph6 file path, a family spec, shorthand, or a graph6 string."""
    path = Path(source)
    if path.is_file():
        text = path.read_text()
        first = next((ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")), "")
        if len(first.split()) == 2 and all(t.isdigit() for t in first.split()):
            return [parse_edge_list(text)]
        return list(read_graph6_lines(text.splitlines()))
    if ":" in source:
        return [parse_family_spec(source)]
    g = parse_shorthand(source)
    if g is not None:
        return [g]
    return [parse_graph6(source)]
