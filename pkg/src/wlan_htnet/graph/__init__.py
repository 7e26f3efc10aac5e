"""
WLAN deployment graphs: domain model, features, batches and dataset files
"""

from .batch import GraphBatch, build_batch
from .dataset import (
    DATASET_FORMAT_VERSION,
    DatasetSplits,
    DatasetStats,
    dataset_stats,
    deployment_to_json,
    iter_dataset,
    parse_deployment,
    read_dataset,
    select_split,
    split_dataset,
    write_dataset,
)
from .features import (
    RelationEdges,
    assemble_edge_features,
    assemble_node_features,
    build_directed_edges,
)
from .model import (
    EDGE_FEATURE_DIM,
    MIN_DISTANCE_M,
    NODE_FEATURE_DIM,
    NUM_CHANNELS,
    DeploymentSequence,
    EdgeKind,
    MapSize,
    NodeKind,
    Relation,
    Snapshot,
    WlanEdge,
    WlanNode,
)

__all__ = [
    "DATASET_FORMAT_VERSION",
    "EDGE_FEATURE_DIM",
    "MIN_DISTANCE_M",
    "NODE_FEATURE_DIM",
    "NUM_CHANNELS",
    "DatasetSplits",
    "DatasetStats",
    "DeploymentSequence",
    "EdgeKind",
    "GraphBatch",
    "MapSize",
    "NodeKind",
    "Relation",
    "RelationEdges",
    "Snapshot",
    "WlanEdge",
    "WlanNode",
    "assemble_edge_features",
    "assemble_node_features",
    "build_batch",
    "build_directed_edges",
    "dataset_stats",
    "deployment_to_json",
    "iter_dataset",
    "parse_deployment",
    "read_dataset",
    "select_split",
    "split_dataset",
    "write_dataset",
]
