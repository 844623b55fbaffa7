from __future__ import annotations

import networkx as nx
from hypothesis import strategies as st

from dbal.graphcore import Graph, build_graph


def to_nx(G: Graph) -> nx.Graph:
    X = nx.Graph()
    X.add_nodes_from(range(G.n))
    X.add_edges_from(G.edges())
    return X


def from_nx(X: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(X.nodes()))}
    return build_graph(len(idx), [(idx[u], idx[v]) for u, v in X.edges()])


def floyd_warshall(G: Graph):
    inf = float("inf")
    n = G.n
    d = [[0 if i == j else (1 if G.has_edge(i, j) else inf) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            dik = d[i][k]
            for j in range(n):
                if dik + d[k][j] < d[i][j]:
                    d[i][j] = dik + d[k][j]
    return d


def brute_w(d, u, v):
    """(|W_uv|, |W_vu|) by the definition, from any distance table."""
    n = len(d)
    return (sum(d[u][x] < d[v][x] for x in range(n)), sum(d[v][x] < d[u][x] for x in range(n)))


def brute_l_balanced(d, l):
    """None when no pair sits at distance l, else the balance verdict."""
    n = len(d)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if d[u][v] == l]
    if not pairs:
        return None
    return all(brute_w(d, u, v)[0] == brute_w(d, u, v)[1] for u, v in pairs)


@st.composite
def graphs(draw, min_n=1, max_n=9, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, keep in zip(pairs, chosen) if keep]
    if connected:
        # a random spanning tree guarantees connectivity
        for v in range(1, n):
            edges.append((draw(st.integers(0, v - 1)), v))
    return build_graph(n, edges)


# criterion -> (ok, detail); filled by test_acceptance, printed at the end of the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int("".join(c for c in k if c.isdigit()) or 0), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
