"""Distance-balance analysis of graphs and graph products."""

__version__ = "0.1.0"

from .graphcore import (  # noqa: E402
    Graph,
    GraphError,
    build_graph,
    complement,
    enumerate_connected,
    generate,
    join_graphs,
    parse_graph6,
    serialize_graph6,
)
from .metrics import (  # noqa: E402
    Balance,
    balance_profile,
    classify_join_of_regulars,
    is_l_distance_balanced,
    is_locally_regular,
)
from .products import cartesian, corona, lexicographic  # noqa: E402

__all__ = [
    "Balance",
    "Graph",
    "GraphError",
    "balance_profile",
    "build_graph",
    "cartesian",
    "classify_join_of_regulars",
    "complement",
    "corona",
    "enumerate_connected",
    "generate",
    "is_l_distance_balanced",
    "is_locally_regular",
    "join_graphs",
    "lexicographic",
    "parse_graph6",
    "serialize_graph6",
]
