"""
Unit tests for the channel model and the throughput oracle
"""

import numpy as np
import pytest

from wlan_htnet.graph.model import EdgeKind, NodeKind, Snapshot, WlanEdge, WlanNode
from wlan_htnet.scenarios import (
    PropagationModel,
    ap_pair_interference,
    channel_overlap,
    channel_state,
    db_to_linear,
    link_throughput,
    oracle_throughput,
)


@pytest.fixture
def propagation():
    return PropagationModel()


def _ap(ap_id, x, channels=(0, 0), interferer=False):
    return WlanNode(
        id=ap_id,
        kind=NodeKind.AP,
        position=(x, 0.0),
        primary_channel=channels[0],
        available_channels=channels,
        interferer=interferer,
    )


def _sta(sta_id, x, ap_id, channels=(0, 0)):
    return WlanNode(
        id=sta_id,
        kind=NodeKind.STA,
        position=(x, 0.0),
        primary_channel=channels[0],
        available_channels=channels,
        attached_ap=ap_id,
    )


def _snapshot(nodes, links):
    edges = [WlanEdge(endpoints=e, kind=EdgeKind.AP_STA, distance=0.0) for e in links]
    aps = [n.id for n in nodes if n.is_ap]
    for i, a in enumerate(aps):
        for b in aps[i + 1 :]:
            edges.append(WlanEdge(endpoints=(a, b), kind=EdgeKind.AP_AP, distance=0.0))
    return Snapshot(t=0, nodes=nodes, edges=edges)


class TestPropagation:
    """Test cases for the path-loss model"""

    def test_reference_loss(self, propagation):
        """Test that 1 m costs the reference loss"""
        assert propagation.path_loss_db(1.0) == pytest.approx(40.0)
        assert propagation.received_dbm(20.0, 10.0) == pytest.approx(20.0 - 40.0 - 35.0)

    def test_coverage_radius(self, propagation):
        """Test that the radius is where the CCA threshold is met"""
        radius = propagation.coverage_radius()
        assert propagation.received_dbm(20.0, radius) == pytest.approx(propagation.cca_dbm)
        assert propagation.covers(radius * 0.99)
        assert not propagation.covers(radius * 1.01)

    def test_min_distance(self, propagation):
        """Test that zero distance is clamped"""
        assert np.isfinite(propagation.path_loss_db(0.0))


class TestChannelOverlap:
    """Test cases for channel overlap"""

    def test_partial(self):
        """Test half of the receiver range shared"""
        assert channel_overlap((0, 3), (2, 5)) == pytest.approx(0.5)

    def test_disjoint(self):
        """Test no shared channel"""
        assert channel_overlap((0, 3), (4, 7)) == 0.0

    def test_asymmetric(self):
        """Test that overlap is relative to the receiver"""
        assert channel_overlap((0, 0), (0, 7)) == 1.0
        assert channel_overlap((0, 7), (0, 0)) == pytest.approx(1 / 8)

    def test_missing(self):
        """Test that a detached side has no overlap"""
        assert channel_overlap(None, (0, 1)) == 0.0


class TestLinkThroughput:
    """Test cases for the per-STA oracle formula"""

    def test_single_channel(self, propagation):
        """Test 20 MHz at SINR 1 (one bit per Hz)"""
        assert link_throughput(1.0, (0, 0), 1.0, 1, propagation) == pytest.approx(16.0)

    def test_shared_bonded(self, propagation):
        """Test airtime, bonding and the per-STA share"""
        assert link_throughput(0.5, (0, 3), 3.0, 2, propagation) == pytest.approx(32.0)

    def test_spectral_cap(self, propagation):
        """Test that very high SINR saturates"""
        assert link_throughput(1.0, (0, 0), 1e9, 1, propagation) == pytest.approx(160.0)

    def test_no_stas(self, propagation):
        """Test the degenerate share"""
        assert link_throughput(1.0, (0, 0), 1.0, 0, propagation) == 0.0


class TestChannelState:
    """Test cases for RSSI, SINR and airtime"""

    def test_lone_ap(self, propagation):
        """Test full airtime and noise-limited SINR without neighbours"""
        snap = channel_state(_snapshot([_ap(0, 0.0), _sta(1, 10.0, 0)], [(0, 1)]), propagation)
        nodes = snap.node_by_id()
        assert nodes[0].airtime == 1.0
        expected = propagation.received_dbm(20.0, 10.0) - propagation.noise_dbm
        assert nodes[1].sinr_db == pytest.approx(expected)
        assert snap.edges[0].distance == pytest.approx(10.0)
        assert snap.edges[0].rssi_dbm == pytest.approx(propagation.received_dbm(20.0, 10.0))

    def test_contention_halves_airtime(self, propagation):
        """Test that two close APs on overlapping channels share the medium"""
        snap = channel_state(
            _snapshot([_ap(0, 0.0), _ap(1, 5.0), _sta(2, 1.0, 0)], [(0, 2)]), propagation
        )
        nodes = snap.node_by_id()
        assert nodes[0].airtime == 0.5
        assert nodes[1].airtime == 0.5

    def test_orthogonal_channels_do_not_interfere(self, propagation):
        """Test that disjoint channels leave airtime and SINR untouched"""
        far = channel_state(
            _snapshot([_ap(0, 0.0), _sta(2, 3.0, 0)], [(0, 2)]), propagation
        ).node_by_id()
        near = channel_state(
            _snapshot([_ap(0, 0.0), _ap(1, 5.0, channels=(4, 4)), _sta(2, 3.0, 0)], [(0, 2)]),
            propagation,
        ).node_by_id()
        assert near[0].airtime == 1.0
        assert near[2].sinr_db == pytest.approx(far[2].sinr_db)

    def test_interference_lowers_sinr(self, propagation):
        """Test that a co-channel AP lowers SINR"""
        alone = channel_state(_snapshot([_ap(0, 0.0), _sta(2, 3.0, 0)], [(0, 2)]), propagation)
        shared = channel_state(
            _snapshot([_ap(0, 0.0), _ap(1, 8.0), _sta(2, 3.0, 0)], [(0, 2)]), propagation
        )
        assert shared.node_by_id()[2].sinr_db < alone.node_by_id()[2].sinr_db

    def test_ap_pair_floor(self, propagation):
        """Test that disjoint APs sit at the interference floor"""
        value = ap_pair_interference(_ap(0, 0.0), _ap(1, 5.0, channels=(4, 7)), propagation)
        assert value == propagation.interference_floor_dbm

    def test_interferer_uses_max_power(self, propagation):
        """Test that interference sources transmit at the maximum power"""
        normal = ap_pair_interference(_ap(0, 0.0), _ap(1, 20.0), propagation)
        loud = ap_pair_interference(_ap(0, 0.0), _ap(1, 20.0, interferer=True), propagation)
        assert loud - normal == pytest.approx(10.0)


class TestOracle:
    """Test cases for oracle labels"""

    def test_labels_match_formula(self, propagation):
        """Test that every attached STA is labelled by the link formula"""
        snap = channel_state(
            _snapshot([_ap(0, 0.0, (0, 1)), _sta(1, 40.0, 0, (0, 1)), _sta(2, 50.0, 0, (0, 1))], [(0, 1), (0, 2)]),
            propagation,
        )
        labels = oracle_throughput(snap, propagation)
        nodes = snap.node_by_id()
        for sta in (1, 2):
            expected = link_throughput(
                nodes[0].airtime, (0, 1), float(db_to_linear(nodes[sta].sinr_db)), 2, propagation
            )
            assert labels[sta] == pytest.approx(expected)
        assert labels[1] > labels[2]

    def test_detached_sta_is_unlabelled(self, propagation):
        """Test that a STA without an AP gets no label"""
        detached = WlanNode(id=3, kind=NodeKind.STA, position=(50.0, 0.0))
        snap = channel_state(
            _snapshot([_ap(0, 0.0), _sta(1, 4.0, 0), detached], [(0, 1)]), propagation
        )
        labels = oracle_throughput(snap, propagation)
        assert set(labels) == {1}
