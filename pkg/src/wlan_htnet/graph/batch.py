"""
Disjoint-union batches of deployment sequences
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .features import assemble_edge_features, assemble_node_features, build_directed_edges
from .model import EDGE_FEATURE_DIM, NODE_FEATURE_DIM, DeploymentSequence, Relation

logger = logging.getLogger(__name__)


@dataclass
class GraphBatch:
    """Every snapshot of every deployment as one large graph.

    Only APs and attached STAs become rows; detached STAs are outside the
    graph while out of coverage. Directed edges are stored relation-major so
    ``relation_bounds[r]`` is a contiguous ``(start, stop)`` range.

    The temporal part is a ``(steps, tracks)`` table: one track per target STA
    of each deployment, ``track_rows[t, j]`` is the node row of that STA at
    time ``t`` or ``-1`` while it is detached (or the sequence has ended).
    """

    node_features: np.ndarray
    edge_features: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    relation_bounds: Dict[Relation, Tuple[int, int]]
    node_keys: np.ndarray
    sta_edge: np.ndarray
    deployment_ids: List[int]
    setups: List[int]
    track_keys: List[Tuple[int, int]]
    track_rows: np.ndarray
    labels: np.ndarray
    excluded_stas: int = 0
    snapshot_counts: List[int] = field(default_factory=list)

    @property
    def num_nodes(self) -> int:
        return int(self.node_features.shape[0])

    @property
    def num_edges(self) -> int:
        return int(self.src.shape[0])

    @property
    def num_steps(self) -> int:
        return int(self.track_rows.shape[0])

    @property
    def num_tracks(self) -> int:
        return int(self.track_rows.shape[1])

    @property
    def target_mask(self) -> np.ndarray:
        return self.track_rows >= 0

    @property
    def num_targets(self) -> int:
        return int(self.target_mask.sum())

    def relation_edges(self, relation: Relation) -> Tuple[np.ndarray, np.ndarray, slice]:
        start, stop = self.relation_bounds[relation]
        return self.src[start:stop], self.dst[start:stop], slice(start, stop)

    def target_table(self) -> List[Tuple[int, int, int, int, float]]:
        """Rows of (deployment id, t, sta id, node row, label) in track order"""
        rows = []
        for t in range(self.num_steps):
            for j, (dep_index, sta_id) in enumerate(self.track_keys):
                row = int(self.track_rows[t, j])
                if row >= 0:
                    rows.append(
                        (self.deployment_ids[dep_index], t, sta_id, row, float(self.labels[t, j]))
                    )
        return rows

    def with_node_features(self, features: np.ndarray) -> "GraphBatch":
        """Copy of the batch with replaced node features (same topology)"""
        return replace(self, node_features=features)

    def with_edge_features(self, features: np.ndarray) -> "GraphBatch":
        return replace(self, edge_features=features)


def build_batch(deployments: Sequence[DeploymentSequence]) -> GraphBatch:
    """Assemble features and indices for a set of deployments"""
    node_rows: List[np.ndarray] = []
    keys: List[Tuple[int, int, int]] = []
    per_relation: Dict[Relation, List[Tuple[np.ndarray, np.ndarray, np.ndarray]]] = {
        r: [] for r in Relation
    }
    sta_edge_parts: List[Tuple[np.ndarray, np.ndarray]] = []
    track_keys: List[Tuple[int, int]] = []
    entries: List[Tuple[int, int, int, float]] = []  # (t, track, row, label)
    excluded = 0
    offset = 0

    for dep_index, dep in enumerate(deployments):
        track_of: Dict[int, int] = {}
        for snap in dep.snapshots:
            kept = [i for i, n in enumerate(snap.nodes) if n.is_ap or n.is_attached]
            local = {old: new for new, old in enumerate(kept)}
            position_of = {n.id: i for i, n in enumerate(snap.nodes)}
            directed = build_directed_edges(snap)
            excluded += directed.excluded_stas

            for i in kept:
                node = snap.nodes[i]
                node_rows.append(assemble_node_features(node))
                keys.append((dep_index, snap.time_index, node.id))

            edge_vectors = [assemble_edge_features(e) for e in snap.edges]
            for rel in Relation:
                src = np.array([local[int(s)] for s in directed.src[rel]], dtype=np.int64)
                dst = np.array([local[int(d)] for d in directed.dst[rel]], dtype=np.int64)
                if len(directed.edge[rel]):
                    feats = np.vstack([edge_vectors[int(e)] for e in directed.edge[rel]])
                else:
                    feats = np.zeros((0, EDGE_FEATURE_DIM), dtype=np.float64)
                per_relation[rel].append((src + offset, dst + offset, feats))
                if rel is Relation.STA_TO_AP:
                    sta_edge_parts.append((src + offset, np.arange(len(src))))

            for sta_id in snap.target_sta_ids():
                if sta_id not in track_of:
                    track_of[sta_id] = len(track_keys)
                    track_keys.append((dep_index, sta_id))
                row = offset + local[position_of[sta_id]]
                entries.append(
                    (snap.time_index, track_of[sta_id], row, snap.labels[sta_id])
                )
            offset += len(kept)

    node_features = (
        np.vstack(node_rows) if node_rows else np.zeros((0, NODE_FEATURE_DIM))
    )

    src_all, dst_all, feat_all = [], [], []
    bounds: Dict[Relation, Tuple[int, int]] = {}
    cursor = 0
    sta_edge = np.full(offset, -1, dtype=np.int64)
    for rel in Relation:
        start = cursor
        for part_index, (src, dst, feats) in enumerate(per_relation[rel]):
            if rel is Relation.STA_TO_AP:
                rows, local_pos = sta_edge_parts[part_index]
                sta_edge[rows] = cursor + local_pos
            src_all.append(src)
            dst_all.append(dst)
            feat_all.append(feats)
            cursor += len(src)
        bounds[rel] = (start, cursor)

    steps = max((len(dep) for dep in deployments), default=0)
    track_rows = np.full((steps, len(track_keys)), -1, dtype=np.int64)
    labels = np.full((steps, len(track_keys)), np.nan, dtype=np.float64)
    for t, track, row, label in entries:
        track_rows[t, track] = row
        labels[t, track] = label

    if excluded:
        logger.debug(f"batch excludes {excluded} detached STA snapshots from the graph")

    return GraphBatch(
        node_features=node_features,
        edge_features=(
            np.vstack(feat_all) if feat_all else np.zeros((0, EDGE_FEATURE_DIM))
        ),
        src=np.concatenate(src_all) if src_all else np.zeros(0, dtype=np.int64),
        dst=np.concatenate(dst_all) if dst_all else np.zeros(0, dtype=np.int64),
        relation_bounds=bounds,
        node_keys=np.asarray(keys, dtype=np.int64).reshape(-1, 3),
        sta_edge=sta_edge,
        deployment_ids=[dep.id for dep in deployments],
        setups=[dep.setup for dep in deployments],
        track_keys=track_keys,
        track_rows=track_rows,
        labels=labels,
        excluded_stas=excluded,
        snapshot_counts=[len(dep) for dep in deployments],
    )

