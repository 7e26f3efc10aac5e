"""
Channel state (RSSI, SINR, interference, airtime) and the analytic
throughput oracle used to label generated snapshots.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..graph.model import EdgeKind, Snapshot, WlanEdge, WlanNode
from .config import PropagationModel, db_to_linear, dbm_to_mw, mw_to_dbm

logger = logging.getLogger(__name__)

ChannelRange = Tuple[int, int]


def range_width(channels: Optional[ChannelRange]) -> int:
    if channels is None:
        return 0
    return channels[1] - channels[0] + 1


def channel_overlap(receiver: Optional[ChannelRange], transmitter: Optional[ChannelRange]) -> float:
    """``|receiver & transmitter| / |receiver|``"""
    if receiver is None or transmitter is None:
        return 0.0
    shared = min(receiver[1], transmitter[1]) - max(receiver[0], transmitter[0]) + 1
    return max(shared, 0) / range_width(receiver)


def tx_power(node: WlanNode, propagation: PropagationModel) -> float:
    return propagation.max_tx_power_dbm if node.interferer else propagation.tx_power_dbm


def _distance(a: WlanNode, b: WlanNode) -> float:
    return float(np.hypot(a.position[0] - b.position[0], a.position[1] - b.position[1]))


def _received(
    tx: WlanNode, rx: WlanNode, propagation: PropagationModel
) -> float:
    return float(propagation.received_dbm(tx_power(tx, propagation), _distance(tx, rx)))


def channel_state(snapshot: Snapshot, propagation: PropagationModel) -> Snapshot:
    """Fill RSSI, SINR, interference and airtime from geometry and channels.

    APs are the only transmitters. A STA's interference is the overlap
    weighted power of every AP other than its own; an AP contends with every
    other AP it hears above the CCA threshold on an overlapping channel.
    """
    nodes = snapshot.node_by_id()
    aps = snapshot.aps()
    noise_mw = float(dbm_to_mw(propagation.noise_dbm))

    airtime: Dict[int, float] = {}
    for ap in aps:
        contenders = 0
        for other in aps:
            if other.id == ap.id:
                continue
            heard = _received(other, ap, propagation) >= propagation.cca_dbm
            if heard and channel_overlap(ap.available_channels, other.available_channels) > 0:
                contenders += 1
        airtime[ap.id] = 1.0 / (1.0 + contenders)

    sinr_db: Dict[int, float] = {}
    for sta in snapshot.stas():
        if sta.attached_ap is None:
            continue
        own = nodes[sta.attached_ap]
        signal_mw = float(dbm_to_mw(_received(own, sta, propagation)))
        interference_mw = 0.0
        for other in aps:
            if other.id == own.id:
                continue
            overlap = channel_overlap(own.available_channels, other.available_channels)
            if overlap > 0:
                interference_mw += overlap * float(dbm_to_mw(_received(other, sta, propagation)))
        sinr_db[sta.id] = float(mw_to_dbm(signal_mw / (noise_mw + interference_mw)))

    new_nodes: List[WlanNode] = []
    for node in snapshot.nodes:
        if node.is_ap:
            new_nodes.append(node.model_copy(update={"airtime": airtime[node.id], "sinr_db": 0.0}))
        else:
            new_nodes.append(
                node.model_copy(update={"airtime": 0.0, "sinr_db": sinr_db.get(node.id, 0.0)})
            )

    new_edges: List[WlanEdge] = []
    for edge in snapshot.edges:
        a, b = nodes[edge.endpoints[0]], nodes[edge.endpoints[1]]
        distance = max(_distance(a, b), propagation.min_distance_m)
        if edge.kind is EdgeKind.AP_AP:
            new_edges.append(
                edge.model_copy(
                    update={
                        "distance": distance,
                        "rssi_dbm": 0.0,
                        "interference_dbm": ap_pair_interference(a, b, propagation),
                    }
                )
            )
        else:
            ap, sta = (a, b) if a.is_ap else (b, a)
            new_edges.append(
                edge.model_copy(
                    update={
                        "distance": distance,
                        "rssi_dbm": _received(ap, sta, propagation),
                        "interference_dbm": 0.0,
                    }
                )
            )
    return snapshot.model_copy(update={"nodes": new_nodes, "edges": new_edges})


def ap_pair_interference(a: WlanNode, b: WlanNode, propagation: PropagationModel) -> float:
    """Overlap-scaled received power between two APs, the stronger direction.

    Zero overlap maps to the interference floor.
    """
    values = []
    for rx, tx in ((a, b), (b, a)):
        overlap = channel_overlap(rx.available_channels, tx.available_channels)
        if overlap <= 0:
            values.append(propagation.interference_floor_dbm)
            continue
        power = _received(tx, rx, propagation) + float(mw_to_dbm(overlap))
        values.append(max(power, propagation.interference_floor_dbm))
    return float(max(values))


def link_throughput(
    airtime: float,
    channels: Optional[ChannelRange],
    sinr_linear: float,
    stas_on_ap: int,
    propagation: PropagationModel,
) -> float:
    """Mbps share of one STA: ``airtime * width * min(log2(1+SINR), cap) * eta / n``"""
    if stas_on_ap <= 0 or sinr_linear <= 0.0:
        return 0.0
    width_mhz = propagation.channel_width_mhz * range_width(channels)
    efficiency = min(float(np.log2(1.0 + sinr_linear)), propagation.max_spectral_efficiency)
    return airtime * width_mhz * efficiency * propagation.efficiency / stas_on_ap


def oracle_throughput(snapshot: Snapshot, propagation: PropagationModel) -> Dict[int, float]:
    """Labels for every attached STA of a snapshot whose channel state is set"""
    nodes = snapshot.node_by_id()
    load: Dict[int, int] = {}
    for node in snapshot.stas():
        if node.attached_ap is not None:
            load[node.attached_ap] = load.get(node.attached_ap, 0) + 1

    labels: Dict[int, float] = {}
    for node in snapshot.stas():
        if node.attached_ap is None:
            continue
        ap = nodes[node.attached_ap]
        labels[node.id] = link_throughput(
            ap.airtime,
            ap.available_channels,
            float(db_to_linear(node.sinr_db)),
            load[ap.id],
            propagation,
        )
    return labels
