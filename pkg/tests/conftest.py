"""
Test configuration and fixtures
"""

from typing import Callable, Dict, List, Optional, Tuple

import pytest

from wlan_htnet.graph.dataset import DatasetSplits
from wlan_htnet.graph.model import (
    DeploymentSequence,
    EdgeKind,
    MapSize,
    NodeKind,
    Snapshot,
    WlanEdge,
    WlanNode,
)
from wlan_htnet.nn.config import ModelConfig
from wlan_htnet.scenarios import generate, scenario_config
from wlan_htnet.training.config import TrainConfig

# AP id -> (primary, available range)
_AP_CHANNELS = {0: (1, (0, 3)), 1: (5, (4, 7))}
_STA_HOME = {2: 0, 3: 0, 4: 1, 5: 1}


def build_snapshot(t: int, detached: Tuple[int, ...] = ()) -> Snapshot:
    """Two APs with two STAs each; STAs in ``detached`` are out of coverage"""
    nodes: List[WlanNode] = []
    for ap_id, (primary, channels) in _AP_CHANNELS.items():
        nodes.append(
            WlanNode(
                id=ap_id,
                kind=NodeKind.AP,
                position=(10.0 + 20.0 * ap_id, 10.0),
                primary_channel=primary,
                available_channels=channels,
                airtime=0.5,
            )
        )
    edges = [
        WlanEdge(endpoints=(0, 1), kind=EdgeKind.AP_AP, distance=20.0, interference_dbm=-80.0)
    ]
    labels: Dict[int, float] = {}
    for sta_id, ap_id in _STA_HOME.items():
        position = (10.0 + 20.0 * ap_id + sta_id + t, 12.0)
        if sta_id in detached:
            nodes.append(WlanNode(id=sta_id, kind=NodeKind.STA, position=position))
            continue
        primary, channels = _AP_CHANNELS[ap_id]
        nodes.append(
            WlanNode(
                id=sta_id,
                kind=NodeKind.STA,
                position=position,
                primary_channel=primary,
                available_channels=channels,
                sinr_db=15.0 + sta_id - t,
                attached_ap=ap_id,
            )
        )
        edges.append(
            WlanEdge(
                endpoints=(ap_id, sta_id),
                kind=EdgeKind.AP_STA,
                distance=2.0 + sta_id,
                rssi_dbm=-50.0 - sta_id,
            )
        )
        labels[sta_id] = 10.0 + sta_id + 2.0 * t
    return Snapshot(t=t, nodes=nodes, edges=edges, labels=labels)


def build_deployment(
    dep_id: int = 0,
    steps: int = 3,
    detached: Optional[Dict[int, Tuple[int, ...]]] = None,
    setup: int = 1,
) -> DeploymentSequence:
    detached = detached or {}
    return DeploymentSequence(
        id=dep_id,
        setup=setup,
        map=MapSize(w=60.0, h=30.0),
        snapshots=[build_snapshot(t, detached.get(t, ())) for t in range(steps)],
    )


@pytest.fixture
def make_deployment() -> Callable[..., DeploymentSequence]:
    """Factory for the handmade two-AP deployment"""
    return build_deployment


@pytest.fixture
def sample_deployment() -> DeploymentSequence:
    """Handmade deployment where STA 5 is detached at t=1"""
    return build_deployment(detached={1: (5,)})


@pytest.fixture
def small_config():
    """Small setup-1 scenario so generation stays fast"""
    return scenario_config(
        1,
        n_aps_range=(2, 3),
        stas_per_ap_range=(2, 4),
        sequence_length=3,
        map_width_range=(20.0, 30.0),
        map_height_range=(20.0, 30.0),
        min_ap_spacing=5.0,
        seed=7,
    )


@pytest.fixture
def small_dataset(small_config) -> List[DeploymentSequence]:
    """Five generated deployments"""
    return generate(small_config, count=5).deployments


@pytest.fixture
def small_splits(small_dataset) -> DatasetSplits:
    return DatasetSplits(train=small_dataset[:3], val=small_dataset[3:4], test=small_dataset[4:])


@pytest.fixture
def tiny_model_config() -> ModelConfig:
    """HTNet small enough for gradient checks"""
    return ModelConfig(
        layers=2, hidden=4, edge_hidden=4, jk_width=8, lstm_hidden=6, lstm_layers=1
    )


@pytest.fixture
def tiny_train_config(tiny_model_config) -> TrainConfig:
    return TrainConfig(epochs=2, batch_size=2, learning_rate=0.01, model=tiny_model_config)
