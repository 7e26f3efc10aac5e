"""
Embedding-collision probes: do randomly initialized encoders map two
snapshots to the same sum-pooled embedding?
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ..autodiff import Tensor
from ..graph.batch import GraphBatch, build_batch
from ..graph.model import (
    NODE_FEATURE_DIM,
    DeploymentSequence,
    EdgeKind,
    MapSize,
    NodeKind,
    Snapshot,
    WlanEdge,
    WlanNode,
)
from ..nn.config import ModelConfig
from ..nn.htl import encode, kind_blind_forward
from ..nn.params import KindBlindParams, init_params
from .linked_star import LinkedStarGraph

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6

Probed = Union[Snapshot, nx.Graph, LinkedStarGraph]


class Encoder(str, Enum):
    HTL = "htl"
    KIND_BLIND = "kind_blind"


def probe_model_config(layers: int = 3, width: int = 8) -> ModelConfig:
    return ModelConfig(
        layers=layers, hidden=width, edge_hidden=width, jk_width=2 * width, temporal=False
    )


def _node(node_id: int, kind: NodeKind, attached_ap: Optional[int] = None) -> WlanNode:
    # identical non-kind features, so only structure and kind can differ
    return WlanNode(
        id=node_id,
        kind=kind,
        position=(0.0, 0.0),
        primary_channel=0,
        available_channels=(0, 0),
        airtime=0.0,
        sinr_db=0.0,
        attached_ap=attached_ap,
    )


def snapshot_from_graph(graph: Union[nx.Graph, LinkedStarGraph]) -> Snapshot:
    """Turn a kind-annotated graph into a snapshot with uniform features.

    Nodes without a ``kind`` attribute are APs; a STA attaches to its AP
    neighbour.
    """
    if isinstance(graph, LinkedStarGraph):
        graph = graph.to_networkx()
    kinds = {v: NodeKind(graph.nodes[v].get("kind", NodeKind.AP.value)) for v in graph.nodes}
    nodes, edges, labels = [], [], {}
    for v in sorted(graph.nodes):
        if kinds[v] is NodeKind.AP:
            nodes.append(_node(int(v), NodeKind.AP))
            continue
        aps = [u for u in graph.neighbors(v) if kinds[u] is NodeKind.AP]
        if len(aps) != 1:
            raise ValueError(f"STA {v} must have exactly one AP neighbour, has {len(aps)}")
        nodes.append(_node(int(v), NodeKind.STA, attached_ap=int(aps[0])))
        labels[int(v)] = 0.0
    for a, b in graph.edges:
        if kinds[a] is NodeKind.AP and kinds[b] is NodeKind.AP:
            edges.append(WlanEdge(endpoints=(int(a), int(b)), kind=EdgeKind.AP_AP, distance=1.0))
        elif kinds[a] is NodeKind.AP or kinds[b] is NodeKind.AP:
            ap, sta = (a, b) if kinds[a] is NodeKind.AP else (b, a)
            edges.append(WlanEdge(endpoints=(int(ap), int(sta)), kind=EdgeKind.AP_STA, distance=1.0))
        else:
            raise ValueError(f"edge {a}-{b} joins two STAs")
    return Snapshot(time_index=0, nodes=nodes, edges=edges, labels=labels)


def kind_swap_pair() -> Tuple[Snapshot, Snapshot]:
    """An AP-STA pair and an AP-AP pair: the same graph once kinds are dropped"""
    ap_sta = nx.Graph()
    ap_sta.add_node(0, kind=NodeKind.AP.value)
    ap_sta.add_node(1, kind=NodeKind.STA.value)
    ap_sta.add_edge(0, 1)
    ap_ap = nx.Graph()
    ap_ap.add_node(0, kind=NodeKind.AP.value)
    ap_ap.add_node(1, kind=NodeKind.AP.value)
    ap_ap.add_edge(0, 1)
    return snapshot_from_graph(ap_sta), snapshot_from_graph(ap_ap)


def _as_batch(item: Probed) -> GraphBatch:
    snapshot = item if isinstance(item, Snapshot) else snapshot_from_graph(item)
    deployment = DeploymentSequence(id=0, map=MapSize(w=1.0, h=1.0), snapshots=[snapshot])
    return build_batch([deployment])


class _RandomEncoder:
    def __init__(self, encoder: Encoder, config: ModelConfig, seed: int) -> None:
        self.encoder = encoder
        self.config = config
        if encoder is Encoder.HTL:
            self.params = init_params(config, seed)
        else:
            self.blind = KindBlindParams.init(
                np.random.default_rng(seed), NODE_FEATURE_DIM, config.jk_width, config.layers
            )

    def __call__(self, batch: GraphBatch) -> np.ndarray:
        if self.encoder is Encoder.HTL:
            out: Tensor = encode(batch, self.params.htl, self.params.jk, self.config, training=False)
        else:
            out = kind_blind_forward(batch, self.blind)
        return out.value.astype(np.float64)


def node_embeddings(
    item: Probed,
    seed: int = 0,
    encoder: Encoder = Encoder.HTL,
    config: Optional[ModelConfig] = None,
) -> Dict[int, np.ndarray]:
    """Evaluation-mode embedding of every node, keyed by node id"""
    batch = _as_batch(item)
    values = _RandomEncoder(encoder, config or probe_model_config(), seed)(batch)
    return {int(key[2]): values[row] for row, key in enumerate(batch.node_keys)}


@dataclass
class ProbeReport:
    encoder: str
    trials: int
    tolerance: float
    differences: List[float] = field(default_factory=list)

    @property
    def distinguished(self) -> List[bool]:
        return [d > self.tolerance for d in self.differences]

    @property
    def distinguished_all(self) -> bool:
        return all(self.distinguished)

    @property
    def collided_all(self) -> bool:
        return not any(self.distinguished)

    def as_dict(self) -> Dict[str, object]:
        return {
            "encoder": self.encoder,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "distinguished": sum(self.distinguished),
            "differences": self.differences,
        }


def pooled_difference(first: np.ndarray, second: np.ndarray) -> float:
    """Max-abs gap between the sum-pooled embeddings of two graphs"""
    return float(np.max(np.abs(first.sum(axis=0) - second.sum(axis=0))))


def embedding_collision_probe(
    first: Probed,
    second: Probed,
    trials: int = 8,
    encoder: Union[Encoder, str] = Encoder.HTL,
    config: Optional[ModelConfig] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    seeds: Optional[Sequence[int]] = None,
) -> ProbeReport:
    """Encode both graphs with ``trials`` independently seeded encoders"""
    encoder = Encoder(encoder)
    config = config or probe_model_config()
    seeds = list(seeds) if seeds is not None else list(range(trials))
    batches = (_as_batch(first), _as_batch(second))
    report = ProbeReport(encoder=encoder.value, trials=len(seeds), tolerance=tolerance)
    for seed in seeds:
        model = _RandomEncoder(encoder, config, seed)
        report.differences.append(pooled_difference(model(batches[0]), model(batches[1])))
    logger.debug(
        f"{encoder.value} probe: {sum(report.distinguished)}/{report.trials} trials distinguish"
    )
    return report
