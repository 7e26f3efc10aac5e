"""
Heterogeneous attention layers (HTL), jumping-knowledge combine and the
kind-blind reference encoder.

All functions operate on a :class:`~wlan_htnet.graph.GraphBatch`, i.e. the
disjoint union of many snapshots, so one call encodes a whole mini-batch.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..autodiff import Tensor, ops
from ..exceptions import ShapeError
from ..graph.batch import GraphBatch
from ..graph.features import KIND_COL
from ..graph.model import Relation
from .config import AttentionMode, ModelConfig
from .params import HtlLayerParams, JkCombinerParams, KindBlindParams

logger = logging.getLogger(__name__)


def edge_hidden(
    h_nodes: Tensor,
    h_edges: Tensor,
    src: np.ndarray,
    dst: np.ndarray,
    W_a: Tensor,
    slope: float = 0.2,
) -> Tensor:
    """``LeakyReLU(W_a [h_u || h_uv || h_v])`` for every directed edge.

    ``W_a`` is split by row blocks so the node parts are projected once per
    node and gathered per edge.
    """
    d_v, d_e = h_nodes.shape[1], h_edges.shape[1]
    if W_a.shape[0] != 2 * d_v + d_e:
        raise ShapeError("edge_hidden", W_a.shape, (2 * d_v + d_e, W_a.shape[1]))
    if h_edges.shape[0] != len(src) or len(src) != len(dst):
        raise ShapeError("edge_hidden", h_edges.shape, (len(src), len(dst)))
    from_u = ops.gather_rows(h_nodes @ ops.slice_rows(W_a, 0, d_v), src)
    from_uv = h_edges @ ops.slice_rows(W_a, d_v, d_v + d_e)
    from_v = ops.gather_rows(h_nodes @ ops.slice_rows(W_a, d_v + d_e, 2 * d_v + d_e), dst)
    return ops.leaky_relu(from_u + from_uv + from_v, slope)


def attention_scores(
    h_edges: Tensor,
    w_a: Tensor,
    dst: np.ndarray,
    num_nodes: int,
    mode: AttentionMode = AttentionMode.SOFTMAX,
) -> Tensor:
    """Scores ``a_uv = w_a . h_uv`` for the edges of one relation"""
    raw = h_edges @ w_a
    if mode is AttentionMode.RAW:
        return raw
    return ops.segment_softmax(raw, dst, num_nodes)


def incoming_mask(dst: np.ndarray, num_nodes: int) -> np.ndarray:
    mask = np.zeros((num_nodes, 1), dtype=np.float64)
    mask[np.asarray(dst, dtype=np.int64)] = 1.0
    return mask


def relation_update(
    h_nodes: Tensor,
    src: np.ndarray,
    dst: np.ndarray,
    scores: Tensor,
    W_r: Tensor,
    b_r: Tensor,
) -> Tensor:
    """``ReLU(sum_u a_uv W_r h_u + b_r)``; nodes without an incoming edge of
    this relation get an all-zero row."""
    num_nodes = h_nodes.shape[0]
    messages = ops.gather_rows(h_nodes @ W_r, src) * scores
    aggregated = ops.segment_sum(messages, dst, num_nodes) + b_r
    mask = incoming_mask(dst, num_nodes).astype(aggregated.value.dtype)
    # mask before the ReLU so zero-filled rows sit exactly at 0
    return ops.relu(aggregated * mask)


def htl_forward(
    h_nodes: Tensor,
    h_edges: Tensor,
    batch: GraphBatch,
    layer: HtlLayerParams,
    config: ModelConfig,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[Tensor, Tensor]:
    """One HTL layer: edge update, per-relation attention, concat, batch norm.

    Returns the new node features (``3 * hidden`` wide) and the new edge
    hidden states, which feed the next layer's edge update.
    """
    if h_nodes.shape[1] != layer.node_in:
        raise ShapeError("htl_forward", h_nodes.shape, (h_nodes.shape[0], layer.node_in))
    num_nodes = batch.num_nodes
    edges_next = edge_hidden(h_nodes, h_edges, batch.src, batch.dst, layer.W_a, config.leaky_slope)

    blocks: List[Tensor] = []
    for rel in Relation:
        src, dst, span = batch.relation_edges(rel)
        rel_edges = ops.slice_rows(edges_next, span.start, span.stop)
        scores = attention_scores(rel_edges, layer.w_a, dst, num_nodes, config.attention)
        blocks.append(relation_update(h_nodes, src, dst, scores, layer.W[rel], layer.b[rel]))
    out = ops.concat(blocks, axis=1)

    if config.batch_norm:
        out = ops.batch_norm(out, layer.gamma, layer.beta, layer.bn, training)
    if training and config.dropout > 0.0:
        out = ops.dropout(out, config.dropout, rng or np.random.default_rng())
    return out, edges_next


def jk_combine(layer_outputs: Sequence[Tensor], jk: JkCombinerParams) -> Tensor:
    """One-layer MLP over the concatenation of ``h^(0) .. h^(K)``"""
    stacked = ops.concat(list(layer_outputs), axis=1)
    if stacked.shape[1] != jk.W.shape[0]:
        raise ShapeError("jk_combine", stacked.shape, jk.W.shape)
    return ops.relu(stacked @ jk.W + jk.b)


def encode(
    batch: GraphBatch,
    htl: Sequence[HtlLayerParams],
    jk: JkCombinerParams,
    config: ModelConfig,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tensor:
    """Static per-snapshot node embeddings for every row of ``batch``"""
    h = Tensor(batch.node_features)
    h_edges = Tensor(batch.edge_features)
    outputs = [h]
    for layer in htl:
        h, h_edges = htl_forward(h, h_edges, batch, layer, config, training, rng)
        outputs.append(h)
    return jk_combine(outputs, jk)


def htl_stack(
    batch: GraphBatch,
    htl: Sequence[HtlLayerParams],
    config: ModelConfig,
    training: bool = False,
) -> Tensor:
    """Output of the last HTL layer (the raw features when there are none)"""
    h = Tensor(batch.node_features)
    h_edges = Tensor(batch.edge_features)
    for layer in htl:
        h, h_edges = htl_forward(h, h_edges, batch, layer, config, training)
    return h


def kind_blind_forward(batch: GraphBatch, params: KindBlindParams) -> Tensor:
    """Sum aggregation over all directed edges with the node-kind column
    removed: ``h' = ReLU((h_v + sum_u h_u) W + b)``."""
    features = batch.node_features.copy()
    features[:, KIND_COL] = 0.0
    h = Tensor(features)
    for W, b in params.layers:
        neighbours = ops.segment_sum(ops.gather_rows(h, batch.src), batch.dst, batch.num_nodes)
        h = ops.relu((h + neighbours) @ W + b)
    return h
