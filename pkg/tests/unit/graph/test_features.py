"""
Unit tests for feature assembly and directed edges
"""

import numpy as np
import pytest

from wlan_htnet.exceptions import InvalidEdgeError, InvalidNodeError
from wlan_htnet.graph.features import (
    AIRTIME_COL,
    AVAILABLE_COLS,
    KIND_COL,
    PRIMARY_COLS,
    SINR_COL,
    assemble_edge_features,
    assemble_node_features,
    build_directed_edges,
)
from wlan_htnet.graph.model import EdgeKind, NodeKind, Relation, Snapshot, WlanEdge, WlanNode


class TestNodeFeatures:
    """Test cases for node feature vectors"""

    def test_ap_layout(self):
        """Test the 21 columns of an AP"""
        node = WlanNode(
            id=0,
            kind=NodeKind.AP,
            position=(3.0, 4.0),
            primary_channel=2,
            available_channels=(1, 3),
            airtime=0.25,
        )
        vec = assemble_node_features(node)
        assert vec.shape == (21,)
        assert vec[KIND_COL] == 0.0
        np.testing.assert_array_equal(vec[1:3], [3.0, 4.0])
        np.testing.assert_array_equal(vec[PRIMARY_COLS], [0, 0, 1, 0, 0, 0, 0, 0])
        np.testing.assert_array_equal(vec[AVAILABLE_COLS], [0, 1, 1, 1, 0, 0, 0, 0])
        assert vec[AIRTIME_COL] == 0.25
        assert vec[SINR_COL] == 0.0

    def test_sta_layout(self):
        """Test that a STA carries SINR and a zero airtime"""
        node = WlanNode(
            id=5,
            kind=NodeKind.STA,
            position=(0.0, 0.0),
            primary_channel=0,
            available_channels=(0, 0),
            airtime=0.9,
            sinr_db=17.5,
            attached_ap=0,
        )
        vec = assemble_node_features(node)
        assert vec[KIND_COL] == 1.0
        assert vec[SINR_COL] == 17.5
        assert vec[AIRTIME_COL] == 0.0

    def test_detached_sta_has_no_channels(self):
        """Test that a STA without channels gets empty one-hot blocks"""
        vec = assemble_node_features(WlanNode(id=1, kind=NodeKind.STA, position=(1.0, 1.0)))
        assert vec[PRIMARY_COLS].sum() == 0.0
        assert vec[AVAILABLE_COLS].sum() == 0.0

    def test_channel_out_of_range(self):
        """Test that channel 8 is rejected"""
        node = WlanNode(id=0, kind=NodeKind.AP, position=(0.0, 0.0), primary_channel=8)
        with pytest.raises(InvalidNodeError, match="primary channel 8"):
            assemble_node_features(node)

    def test_primary_outside_range(self):
        """Test that the primary channel must lie in the available range"""
        node = WlanNode(
            id=0, kind=NodeKind.AP, position=(0.0, 0.0), primary_channel=5, available_channels=(0, 3)
        )
        with pytest.raises(InvalidNodeError, match="not in"):
            assemble_node_features(node)

    def test_empty_channel_range(self):
        """Test that lo > hi is rejected"""
        node = WlanNode(id=0, kind=NodeKind.AP, position=(0.0, 0.0), available_channels=(4, 2))
        with pytest.raises(InvalidNodeError, match="empty channel range"):
            assemble_node_features(node)

    def test_airtime_range(self):
        """Test that AP airtime must lie in [0, 1]"""
        node = WlanNode(id=0, kind=NodeKind.AP, position=(0.0, 0.0), airtime=1.5)
        with pytest.raises(InvalidNodeError, match="airtime"):
            assemble_node_features(node)

    def test_ap_cannot_attach(self):
        """Test that an AP with an attachment is refused by the model"""
        with pytest.raises(ValueError):
            WlanNode(id=0, kind=NodeKind.AP, position=(0.0, 0.0), attached_ap=1)


class TestEdgeFeatures:
    """Test cases for edge feature vectors"""

    def test_ap_sta_edge(self):
        """Test that an AP-STA edge carries RSSI and no interference"""
        edge = WlanEdge(
            endpoints=(0, 1), kind=EdgeKind.AP_STA, distance=4.0, rssi_dbm=-60.0, interference_dbm=-70.0
        )
        np.testing.assert_array_equal(assemble_edge_features(edge), [0.0, 4.0, -60.0, 0.0])

    def test_ap_ap_edge(self):
        """Test that an AP-AP edge carries interference and no RSSI"""
        edge = WlanEdge(
            endpoints=(0, 1), kind=EdgeKind.AP_AP, distance=9.0, rssi_dbm=-60.0, interference_dbm=-70.0
        )
        np.testing.assert_array_equal(assemble_edge_features(edge), [1.0, 9.0, 0.0, -70.0])

    def test_negative_distance(self):
        """Test that a negative distance is rejected"""
        edge = WlanEdge(endpoints=(0, 1), kind=EdgeKind.AP_AP, distance=-1.0)
        with pytest.raises(InvalidEdgeError, match="distance"):
            assemble_edge_features(edge)


class TestDirectedEdges:
    """Test cases for relation-partitioned directed edges"""

    def test_relation_sizes(self, make_deployment):
        """Test one AP-AP edge in both directions and one copy per link"""
        snapshot = make_deployment().snapshots[0]
        directed = build_directed_edges(snapshot)
        assert directed.sizes() == (2, 4, 4)
        assert directed.excluded_stas == 0

    def test_sta_to_ap_points_at_ap(self, make_deployment):
        """Test that STA->AP edges go from a STA row to its AP row"""
        snapshot = make_deployment().snapshots[0]
        directed = build_directed_edges(snapshot)
        for s, d in zip(directed.src[Relation.STA_TO_AP], directed.dst[Relation.STA_TO_AP]):
            sta, ap = snapshot.nodes[s], snapshot.nodes[d]
            assert sta.kind is NodeKind.STA
            assert sta.attached_ap == ap.id

    def test_detached_sta_is_excluded(self, make_deployment):
        """Test that a detached STA contributes no directed edges"""
        snapshot = make_deployment(detached={0: (5,)}).snapshots[0]
        directed = build_directed_edges(snapshot)
        assert directed.sizes() == (2, 3, 3)
        assert directed.excluded_stas == 1

    def test_unknown_endpoint(self):
        """Test that an edge to a missing node is rejected"""
        snapshot = Snapshot(
            t=0,
            nodes=[WlanNode(id=0, kind=NodeKind.AP, position=(0.0, 0.0))],
            edges=[WlanEdge(endpoints=(0, 9), kind=EdgeKind.AP_AP, distance=1.0)],
        )
        with pytest.raises(InvalidEdgeError, match="unknown node"):
            build_directed_edges(snapshot)

    def test_sta_sta_edge(self):
        """Test that an AP-STA edge between two STAs is rejected"""
        snapshot = Snapshot(
            t=0,
            nodes=[
                WlanNode(id=0, kind=NodeKind.STA, position=(0.0, 0.0)),
                WlanNode(id=1, kind=NodeKind.STA, position=(1.0, 0.0)),
            ],
            edges=[WlanEdge(endpoints=(0, 1), kind=EdgeKind.AP_STA, distance=1.0)],
        )
        with pytest.raises(InvalidEdgeError, match="AP-STA"):
            build_directed_edges(snapshot)

    def test_edge_matrix_rows(self, make_deployment):
        """Test that the snapshot edge matrix has one row per directed edge"""
        snapshot = make_deployment().snapshots[0]
        assert snapshot.edge_feature_matrix().shape == (10, 4)
        assert snapshot.node_feature_matrix().shape == (6, 21)
