"""
Unit tests for heterogeneous attention layers and the kind-blind encoder
"""

import numpy as np
import pytest

from wlan_htnet.autodiff import Tensor
from wlan_htnet.exceptions import ShapeError
from wlan_htnet.graph.batch import build_batch
from wlan_htnet.graph.features import KIND_COL
from wlan_htnet.graph.model import Relation
from wlan_htnet.nn.config import AttentionMode, ModelConfig
from wlan_htnet.nn.htl import (
    attention_scores,
    edge_hidden,
    encode,
    htl_forward,
    htl_stack,
    jk_combine,
    kind_blind_forward,
    relation_update,
)
from wlan_htnet.nn.params import JkCombinerParams, KindBlindParams, init_params


@pytest.fixture
def batch(make_deployment):
    return build_batch([make_deployment(steps=2)])


class TestAttention:
    """Test cases for edge hidden states and attention scores"""

    def test_edge_hidden_shape(self, batch):
        """Test one hidden row per directed edge"""
        rng = np.random.default_rng(0)
        W_a = Tensor(rng.normal(size=(2 * 21 + 4, 5)))
        out = edge_hidden(
            Tensor(batch.node_features), Tensor(batch.edge_features), batch.src, batch.dst, W_a
        )
        assert out.shape == (batch.num_edges, 5)

    def test_edge_hidden_checks_width(self, batch):
        """Test that a wrongly sized W_a raises ShapeError"""
        with pytest.raises(ShapeError):
            edge_hidden(
                Tensor(batch.node_features),
                Tensor(batch.edge_features),
                batch.src,
                batch.dst,
                Tensor(np.ones((10, 5))),
            )

    def test_softmax_scores_sum_per_destination(self, batch):
        """Test that softmax scores sum to one over each node's incoming edges"""
        src, dst, span = batch.relation_edges(Relation.STA_TO_AP)
        rng = np.random.default_rng(1)
        h_edges = Tensor(rng.normal(size=(len(dst), 3)))
        scores = attention_scores(h_edges, Tensor(rng.normal(size=(3, 1))), dst, batch.num_nodes)
        totals = np.zeros(batch.num_nodes)
        np.add.at(totals, dst, scores.value.reshape(-1))
        np.testing.assert_allclose(totals[np.unique(dst)], 1.0)

    def test_raw_scores(self, batch):
        """Test that raw mode returns the unnormalized dot products"""
        _, dst, _ = batch.relation_edges(Relation.AP_TO_STA)
        h_edges = Tensor(np.ones((len(dst), 2)))
        scores = attention_scores(
            h_edges, Tensor(np.array([[1.0], [2.0]])), dst, batch.num_nodes, AttentionMode.RAW
        )
        np.testing.assert_allclose(scores.value, 3.0)


class TestRelationUpdate:
    """Test cases for per-relation aggregation"""

    def test_nodes_without_incoming_edges_are_zero(self, batch):
        """Test that APs get zero rows in the AP->STA block"""
        src, dst, _ = batch.relation_edges(Relation.AP_TO_STA)
        rng = np.random.default_rng(2)
        scores = Tensor(np.ones((len(src), 1)))
        out = relation_update(
            Tensor(batch.node_features),
            src,
            dst,
            scores,
            Tensor(rng.normal(size=(21, 4))),
            Tensor(np.full((1, 4), 5.0)),
        ).value
        aps = batch.node_features[:, KIND_COL] == 0.0
        np.testing.assert_array_equal(out[aps], 0.0)
        assert np.all(out[~aps] >= 0.0)


class TestHtlForward:
    """Test cases for full HTL layers"""

    def test_width_is_three_blocks(self, batch, tiny_model_config):
        """Test that a layer emits 3 * hidden columns"""
        params = init_params(tiny_model_config, seed=0)
        out, edges = htl_forward(
            Tensor(batch.node_features),
            Tensor(batch.edge_features),
            batch,
            params.htl[0],
            tiny_model_config,
        )
        assert out.shape == (batch.num_nodes, 3 * tiny_model_config.hidden)
        assert edges.shape == (batch.num_edges, tiny_model_config.edge_hidden)

    def test_input_width_checked(self, batch, tiny_model_config):
        """Test that the second layer refuses raw features"""
        params = init_params(tiny_model_config, seed=0)
        with pytest.raises(ShapeError):
            htl_forward(
                Tensor(batch.node_features),
                Tensor(batch.edge_features),
                batch,
                params.htl[1],
                tiny_model_config,
            )

    def test_encode_shape(self, batch, tiny_model_config):
        """Test the jumping-knowledge embedding width"""
        params = init_params(tiny_model_config, seed=0)
        out = encode(batch, params.htl, params.jk, tiny_model_config)
        assert out.shape == (batch.num_nodes, tiny_model_config.jk_width)
        assert np.all(out.value >= 0.0)

    def test_zero_layers(self, batch):
        """Test that K=0 feeds the raw features to the combiner"""
        config = ModelConfig(layers=0, hidden=4, edge_hidden=4, jk_width=8, temporal=False)
        params = init_params(config, seed=0)
        assert params.jk.W.shape == (21, 8)
        np.testing.assert_array_equal(htl_stack(batch, params.htl, config).value, batch.node_features)

    def test_eval_mode_is_per_snapshot(self, make_deployment, tiny_model_config):
        """Test that evaluation embeddings of a snapshot ignore the rest of the batch"""
        params = init_params(tiny_model_config, seed=4)
        alone = build_batch([make_deployment(steps=1)])
        together = build_batch([make_deployment(steps=1), make_deployment(dep_id=1, steps=3)])
        a = encode(alone, params.htl, params.jk, tiny_model_config).value
        b = encode(together, params.htl, params.jk, tiny_model_config).value
        np.testing.assert_allclose(b[: alone.num_nodes], a)


class TestJkCombine:
    """Test cases for the jumping-knowledge combiner"""

    def test_relu_of_projected_concatenation(self):
        """Test relu([h0 | h1] W + b) against numpy"""
        rng = np.random.default_rng(3)
        h0, h1 = rng.normal(size=(4, 2)), rng.normal(size=(4, 3))
        W, b = rng.normal(size=(5, 6)), rng.normal(size=(1, 6))
        out = jk_combine([Tensor(h0), Tensor(h1)], JkCombinerParams(W=Tensor(W), b=Tensor(b)))
        expected = np.maximum(np.hstack([h0, h1]) @ W + b, 0.0)
        np.testing.assert_allclose(out.value, expected)

    def test_width_checked(self):
        """Test that a combiner sized for other layers raises ShapeError"""
        jk = JkCombinerParams(W=Tensor(np.ones((4, 2))), b=Tensor(np.zeros((1, 2))))
        with pytest.raises(ShapeError, match="jk_combine"):
            jk_combine([Tensor(np.ones((3, 2))), Tensor(np.ones((3, 3)))], jk)


class TestKindBlind:
    """Test cases for the kind-blind reference encoder"""

    def test_ignores_kind_column(self, batch):
        """Test that flipping the kind column changes nothing"""
        params = KindBlindParams.init(np.random.default_rng(0), 21, 6, 2)
        flipped = batch.with_node_features(batch.node_features.copy())
        flipped.node_features[:, KIND_COL] = 1.0 - flipped.node_features[:, KIND_COL]
        np.testing.assert_array_equal(
            kind_blind_forward(batch, params).value, kind_blind_forward(flipped, params).value
        )
