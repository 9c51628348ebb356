"""Desk-scale workbench for online pattern-avoidance games on random graphs:
exact density calculus, forced-structure constructions, seeded game
simulation, Monte Carlo threshold estimation, regularity checkers, and
brute-force lemma verification.
"""

__version__ = "0.1.0"

from .densities import (
    Balancedness,
    DensityReport,
    PremiseReport,
    XRational,
    balancedness,
    m,
    m1,
    m2,
    m2_bar,
    premise_check,
    product_rooted_m,
    rooted_m,
    rooted_m2,
    threshold_exponent,
)
from .game import ColoredBoard, GameConfig, GameRecord, closes_mono_copy, edge_process, play
from .graphs import (
    EmbeddingCount,
    Graph,
    RootedGraph,
    canonical_form,
    count_copies_through_edge,
    count_rooted_copies,
    count_subgraph_copies,
    enumerate_connected_graphs,
    graph_to_text,
    named_graph,
    parse_graph_text,
)

__all__ = [
    "Balancedness",
    "ColoredBoard",
    "DensityReport",
    "EmbeddingCount",
    "GameConfig",
    "GameRecord",
    "Graph",
    "PremiseReport",
    "RootedGraph",
    "XRational",
    "balancedness",
    "canonical_form",
    "closes_mono_copy",
    "count_copies_through_edge",
    "count_rooted_copies",
    "count_subgraph_copies",
    "edge_process",
    "enumerate_connected_graphs",
    "graph_to_text",
    "m",
    "m1",
    "m2",
    "m2_bar",
    "named_graph",
    "parse_graph_text",
    "play",
    "premise_check",
    "product_rooted_m",
    "rooted_m",
    "rooted_m2",
    "threshold_exponent",
]
