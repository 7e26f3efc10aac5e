"""
Domain model of dynamic WLAN deployments
"""

from enum import Enum, IntEnum
from typing import Dict, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

NUM_CHANNELS = 8
NODE_FEATURE_DIM = 21
EDGE_FEATURE_DIM = 4
MIN_DISTANCE_M = 0.01
DEFAULT_T_G = 10.0


class NodeKind(str, Enum):
    AP = "AP"
    STA = "STA"


class EdgeKind(str, Enum):
    AP_STA = "AP-STA"
    AP_AP = "AP-AP"


class Relation(IntEnum):
    """Directed message-passing relations, in concatenation order"""

    AP_TO_AP = 0
    STA_TO_AP = 1
    AP_TO_STA = 2

    @property
    def label(self) -> str:
        return {0: "AP->AP", 1: "STA->AP", 2: "AP->STA"}[int(self)]


class WlanNode(BaseModel):
    """An AP or a STA at one point in time.

    Channel fields are optional so that detached STAs can carry no channel
    information; range checks happen at feature assembly.
    """

    model_config = ConfigDict(frozen=True)

    id: int
    kind: NodeKind
    position: Tuple[float, float]
    primary_channel: Optional[int] = None
    available_channels: Optional[Tuple[int, int]] = None
    airtime: float = 0.0
    sinr_db: float = 0.0
    attached_ap: Optional[int] = None
    # interference-source member; kept out of the feature vector
    interferer: bool = False

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "WlanNode":
        if self.kind is NodeKind.AP and self.attached_ap is not None:
            raise ValueError("an AP cannot be attached to another AP")
        return self

    @property
    def is_ap(self) -> bool:
        return self.kind is NodeKind.AP

    @property
    def is_attached(self) -> bool:
        return self.kind is NodeKind.STA and self.attached_ap is not None


class WlanEdge(BaseModel):
    """Undirected AP-STA or AP-AP edge"""

    model_config = ConfigDict(frozen=True)

    endpoints: Tuple[int, int]
    kind: EdgeKind
    distance: float
    rssi_dbm: float = 0.0
    interference_dbm: float = 0.0


class Snapshot(BaseModel):
    """One timestamped heterogeneous graph plus its STA throughput labels"""

    model_config = ConfigDict(populate_by_name=True)

    time_index: int = Field(alias="t")
    nodes: List[WlanNode]
    edges: List[WlanEdge]
    labels: Dict[int, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_labels(self) -> "Snapshot":
        for sta_id, value in self.labels.items():
            if not value >= 0.0:
                raise ValueError(f"label for STA {sta_id} must be >= 0, got {value}")
        return self

    def unlabelled_stas(self) -> List[int]:
        return sorted(n.id for n in self.nodes if n.is_attached and n.id not in self.labels)

    def node_ids(self) -> Set[int]:
        return {n.id for n in self.nodes}

    def node_by_id(self) -> Dict[int, WlanNode]:
        return {n.id: n for n in self.nodes}

    def aps(self) -> List[WlanNode]:
        return [n for n in self.nodes if n.is_ap]

    def stas(self) -> List[WlanNode]:
        return [n for n in self.nodes if not n.is_ap]

    def target_sta_ids(self) -> List[int]:
        """Attached, labelled STAs that are not interference-source members"""
        return [
            n.id
            for n in self.nodes
            if n.is_attached and not n.interferer and n.id in self.labels
        ]

    def node_feature_matrix(self) -> "np.ndarray":
        from .features import assemble_node_features

        return _stack([assemble_node_features(n) for n in self.nodes], NODE_FEATURE_DIM)

    def edge_feature_matrix(self) -> "np.ndarray":
        """Feature matrix with one row per directed message-passing edge"""
        from .features import assemble_edge_features, build_directed_edges

        directed = build_directed_edges(self)
        rows = [assemble_edge_features(self.edges[i]) for i in directed.edge_rows()]
        return _stack(rows, EDGE_FEATURE_DIM)


class MapSize(BaseModel):
    w: float
    h: float


class DeploymentSequence(BaseModel):
    """A discrete-time dynamic WLAN graph: snapshots every ``t_g`` seconds"""

    id: int
    setup: int = 0
    t_g: float = DEFAULT_T_G
    map: MapSize
    snapshots: List[Snapshot]

    @model_validator(mode="after")
    def _check_sequence(self) -> "DeploymentSequence":
        if not self.snapshots:
            return self
        universe = self.snapshots[0].node_ids()
        for position, snap in enumerate(self.snapshots):
            if snap.time_index != position:
                raise ValueError(
                    f"snapshot {position} has time index {snap.time_index}"
                )
            if snap.node_ids() != universe:
                raise ValueError(f"snapshot {position} changes the node id universe")
            missing = snap.unlabelled_stas()
            if missing:
                raise ValueError(
                    f"snapshot {position}: attached STAs without label: {missing[:5]}"
                )
        return self

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Snapshot]:  # type: ignore[override]
        return iter(self.snapshots)

    @property
    def labels(self) -> List[Dict[int, float]]:
        return [s.labels for s in self.snapshots]

    def target_pairs(self) -> List[Tuple[int, int]]:
        """(time index, STA id) for every labelled target"""
        return [(s.time_index, sta) for s in self.snapshots for sta in s.target_sta_ids()]


def _stack(rows: List["np.ndarray"], width: int) -> "np.ndarray":
    import numpy as np

    if not rows:
        return np.zeros((0, width), dtype=np.float64)
    return np.vstack(rows)
