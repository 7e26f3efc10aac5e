"""
Expressiveness checks: 1-WL on linked star graphs and embedding probes
"""

from .linked_star import LinkedStarGraph, enumerate_linked_stars, relabel
from .probe import (
    DEFAULT_TOLERANCE,
    Encoder,
    ProbeReport,
    embedding_collision_probe,
    kind_swap_pair,
    node_embeddings,
    pooled_difference,
    probe_model_config,
    snapshot_from_graph,
)
from .wl import (
    WlCheckReport,
    WlColoring,
    exhaustive_check,
    hash_color,
    initial_colors,
    wl_distinguishes,
    wl_refine,
)

__all__ = [
    "DEFAULT_TOLERANCE",
    "Encoder",
    "LinkedStarGraph",
    "ProbeReport",
    "WlCheckReport",
    "WlColoring",
    "embedding_collision_probe",
    "enumerate_linked_stars",
    "exhaustive_check",
    "hash_color",
    "initial_colors",
    "kind_swap_pair",
    "node_embeddings",
    "pooled_difference",
    "probe_model_config",
    "relabel",
    "snapshot_from_graph",
    "wl_distinguishes",
    "wl_refine",
]
