"""
Feature-vector assembly and relation-partitioned directed edges.

Node layout (21): ``kind | x, y | primary one-hot (8) | available multi-hot (8)
| airtime | sinr``. Edge layout (4): ``kind | distance | rssi | interference``.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..exceptions import InvalidEdgeError, InvalidNodeError
from .model import (
    EDGE_FEATURE_DIM,
    NODE_FEATURE_DIM,
    NUM_CHANNELS,
    EdgeKind,
    NodeKind,
    Relation,
    Snapshot,
    WlanEdge,
    WlanNode,
)

logger = logging.getLogger(__name__)

# column offsets inside the node vector
KIND_COL = 0
POSITION_COLS = slice(1, 3)
PRIMARY_COLS = slice(3, 3 + NUM_CHANNELS)
AVAILABLE_COLS = slice(3 + NUM_CHANNELS, 3 + 2 * NUM_CHANNELS)
AIRTIME_COL = 19
SINR_COL = 20

# column offsets inside the edge vector
EDGE_KIND_COL = 0
DISTANCE_COL = 1
RSSI_COL = 2
INTERFERENCE_COL = 3


def _check_channel(node: WlanNode, value: int, what: str) -> None:
    if not 0 <= value < NUM_CHANNELS:
        raise InvalidNodeError(
            f"node {node.id}: {what} {value} outside [0, {NUM_CHANNELS})"
        )


def assemble_node_features(node: WlanNode) -> np.ndarray:
    """Build the 21-dimensional feature vector of ``node``"""
    vec = np.zeros(NODE_FEATURE_DIM, dtype=np.float64)
    vec[KIND_COL] = 0.0 if node.kind is NodeKind.AP else 1.0
    vec[POSITION_COLS] = node.position

    if node.primary_channel is not None:
        _check_channel(node, node.primary_channel, "primary channel")
        vec[PRIMARY_COLS.start + node.primary_channel] = 1.0
    if node.available_channels is not None:
        lo, hi = node.available_channels
        _check_channel(node, lo, "available channel")
        _check_channel(node, hi, "available channel")
        if lo > hi:
            raise InvalidNodeError(f"node {node.id}: empty channel range [{lo}, {hi}]")
        vec[AVAILABLE_COLS.start + lo : AVAILABLE_COLS.start + hi + 1] = 1.0
        if node.primary_channel is not None and not lo <= node.primary_channel <= hi:
            raise InvalidNodeError(
                f"node {node.id}: primary {node.primary_channel} not in [{lo}, {hi}]"
            )

    if node.kind is NodeKind.AP:
        if not 0.0 <= node.airtime <= 1.0:
            raise InvalidNodeError(f"node {node.id}: airtime {node.airtime} not in [0, 1]")
        vec[AIRTIME_COL] = node.airtime
    else:
        vec[SINR_COL] = node.sinr_db
    return vec


def assemble_edge_features(edge: WlanEdge) -> np.ndarray:
    """Build the 4-dimensional feature vector shared by both directions"""
    if not edge.distance >= 0.0:
        raise InvalidEdgeError(
            f"edge {edge.endpoints}: distance must be >= 0, got {edge.distance}"
        )
    vec = np.zeros(EDGE_FEATURE_DIM, dtype=np.float64)
    if edge.kind is EdgeKind.AP_AP:
        vec[EDGE_KIND_COL] = 1.0
        vec[INTERFERENCE_COL] = edge.interference_dbm
    else:
        vec[RSSI_COL] = edge.rssi_dbm
    vec[DISTANCE_COL] = edge.distance
    return vec


@dataclass
class RelationEdges:
    """Directed edges of one snapshot, grouped by relation.

    ``src``/``dst`` hold row positions into ``snapshot.nodes``; ``edge`` holds
    the position of the undirected edge in ``snapshot.edges`` the directed
    copy was made from.
    """

    src: Dict[Relation, np.ndarray] = field(default_factory=dict)
    dst: Dict[Relation, np.ndarray] = field(default_factory=dict)
    edge: Dict[Relation, np.ndarray] = field(default_factory=dict)
    excluded_stas: int = 0

    def sizes(self) -> Tuple[int, int, int]:
        return tuple(len(self.src[r]) for r in Relation)  # type: ignore[return-value]

    def edge_rows(self) -> List[int]:
        return [int(i) for r in Relation for i in self.edge[r]]

    def pairs(self) -> List[Tuple[int, int]]:
        return [
            (int(s), int(d)) for r in Relation for s, d in zip(self.src[r], self.dst[r])
        ]


def build_directed_edges(snapshot: Snapshot) -> RelationEdges:
    """Split every undirected edge into its directed message-passing copies.

    STAs with no attached AP are dropped together with any AP-STA edge that
    touches them; the number dropped is reported in ``excluded_stas``.
    """
    row_of = {node.id: row for row, node in enumerate(snapshot.nodes)}
    by_id = snapshot.node_by_id()
    buckets: Dict[Relation, List[Tuple[int, int, int]]] = {r: [] for r in Relation}
    linked_stas = set()

    for position, edge in enumerate(snapshot.edges):
        a, b = edge.endpoints
        if a not in by_id or b not in by_id:
            raise InvalidEdgeError(f"edge {edge.endpoints} references an unknown node")
        if edge.kind is EdgeKind.AP_AP:
            if not (by_id[a].is_ap and by_id[b].is_ap):
                raise InvalidEdgeError(f"edge {edge.endpoints} is not between two APs")
            buckets[Relation.AP_TO_AP].append((row_of[a], row_of[b], position))
            buckets[Relation.AP_TO_AP].append((row_of[b], row_of[a], position))
            continue
        ap, sta = (a, b) if by_id[a].is_ap else (b, a)
        if not by_id[ap].is_ap or by_id[sta].is_ap:
            raise InvalidEdgeError(f"edge {edge.endpoints} is not an AP-STA pair")
        if by_id[sta].attached_ap != ap:
            continue
        linked_stas.add(sta)
        buckets[Relation.STA_TO_AP].append((row_of[sta], row_of[ap], position))
        buckets[Relation.AP_TO_STA].append((row_of[ap], row_of[sta], position))

    excluded = sum(1 for n in snapshot.nodes if not n.is_ap and n.id not in linked_stas)
    if excluded:
        logger.debug(f"snapshot t={snapshot.time_index}: {excluded} STAs out of coverage")

    result = RelationEdges(excluded_stas=excluded)
    for rel, items in buckets.items():
        arr = np.asarray(items, dtype=np.int64).reshape(-1, 3)
        result.src[rel] = arr[:, 0]
        result.dst[rel] = arr[:, 1]
        result.edge[rel] = arr[:, 2]
    return result
