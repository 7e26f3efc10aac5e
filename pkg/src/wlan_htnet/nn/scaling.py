"""
Input standardization and feature-group masking applied inside the model
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..graph.batch import GraphBatch
from ..graph.features import (
    AIRTIME_COL,
    AVAILABLE_COLS,
    DISTANCE_COL,
    EDGE_KIND_COL,
    INTERFERENCE_COL,
    KIND_COL,
    POSITION_COLS,
    PRIMARY_COLS,
    RSSI_COL,
    SINR_COL,
)
from .config import FEATURE_GROUPS, ModelConfig

logger = logging.getLogger(__name__)

_NODE_GROUP_COLS = {
    "position": list(range(POSITION_COLS.start, POSITION_COLS.stop)),
    "channel": list(range(PRIMARY_COLS.start, AVAILABLE_COLS.stop)),
    "airtime": [AIRTIME_COL],
    "sinr": [SINR_COL],
}
# location ablation removes edge lengths along with coordinates
_EDGE_GROUP_COLS = {
    "position": [DISTANCE_COL],
    "rssi": [RSSI_COL],
    "interference": [INTERFERENCE_COL],
}


@dataclass
class ColumnStats:
    mean: float = 0.0
    std: float = 1.0

    @classmethod
    def of(cls, values: np.ndarray) -> "ColumnStats":
        if values.size == 0:
            return cls()
        std = float(values.std())
        return cls(mean=float(values.mean()), std=std if std > 1e-12 else 1.0)


@dataclass
class FeatureScaler:
    """Train-split statistics for positions and (optionally) signal features.

    Signal columns are standardized only on the rows where they are defined
    (airtime on APs, SINR on STAs, RSSI on AP-STA edges, interference on
    AP-AP edges); rows where the feature is absent keep their zero.
    """

    standardize_positions: bool = True
    standardize_signals: bool = False
    masks: List[str] = field(default_factory=list)
    node_stats: Dict[int, ColumnStats] = field(default_factory=dict)
    edge_stats: Dict[int, ColumnStats] = field(default_factory=dict)

    @classmethod
    def from_config(cls, config: ModelConfig) -> "FeatureScaler":
        return cls(
            standardize_positions=config.standardize_positions,
            standardize_signals=config.standardize_signals,
            masks=list(config.feature_masks),
        )

    @property
    def fitted(self) -> bool:
        return bool(self.node_stats or self.edge_stats) or not (
            self.standardize_positions or self.standardize_signals
        )

    def _node_rows(self, batch: GraphBatch, col: int) -> np.ndarray:
        kinds = batch.node_features[:, KIND_COL]
        if col == AIRTIME_COL:
            return kinds == 0.0
        if col == SINR_COL:
            return kinds == 1.0
        return np.ones(batch.num_nodes, dtype=bool)

    def _edge_rows(self, batch: GraphBatch, col: int) -> np.ndarray:
        kinds = batch.edge_features[:, EDGE_KIND_COL]
        if col == RSSI_COL:
            return kinds == 0.0
        if col == INTERFERENCE_COL:
            return kinds == 1.0
        return np.ones(batch.num_edges, dtype=bool)

    def _node_columns(self) -> List[int]:
        cols: List[int] = []
        if self.standardize_positions:
            cols.extend(_NODE_GROUP_COLS["position"])
        if self.standardize_signals:
            cols.extend([AIRTIME_COL, SINR_COL])
        return cols

    def _edge_columns(self) -> List[int]:
        return [DISTANCE_COL, RSSI_COL, INTERFERENCE_COL] if self.standardize_signals else []

    def fit(self, batch: GraphBatch) -> "FeatureScaler":
        self.node_stats = {
            col: ColumnStats.of(batch.node_features[self._node_rows(batch, col), col])
            for col in self._node_columns()
        }
        self.edge_stats = {
            col: ColumnStats.of(batch.edge_features[self._edge_rows(batch, col), col])
            for col in self._edge_columns()
        }
        logger.debug(f"Scaler fitted on {batch.num_nodes} nodes, {batch.num_edges} edges")
        return self

    def transform(self, batch: GraphBatch) -> GraphBatch:
        nodes = batch.node_features.copy()
        edges = batch.edge_features.copy()
        for col, stats in self.node_stats.items():
            rows = self._node_rows(batch, col)
            nodes[rows, col] = (nodes[rows, col] - stats.mean) / stats.std
        for col, stats in self.edge_stats.items():
            rows = self._edge_rows(batch, col)
            edges[rows, col] = (edges[rows, col] - stats.mean) / stats.std
        for group in self.masks:
            for col in _NODE_GROUP_COLS.get(group, []):
                nodes[:, col] = 0.0
            for col in _EDGE_GROUP_COLS.get(group, []):
                edges[:, col] = 0.0
        return batch.with_node_features(nodes).with_edge_features(edges)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "standardize_positions": self.standardize_positions,
            "standardize_signals": self.standardize_signals,
            "masks": list(self.masks),
            "node_stats": {str(k): [v.mean, v.std] for k, v in self.node_stats.items()},
            "edge_stats": {str(k): [v.mean, v.std] for k, v in self.edge_stats.items()},
        }

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "FeatureScaler":
        data = data or {}
        masks: Sequence[str] = data.get("masks", [])
        unknown = set(masks) - set(FEATURE_GROUPS)
        if unknown:
            raise ValueError(f"unknown feature groups in scaler: {sorted(unknown)}")
        return cls(
            standardize_positions=bool(data.get("standardize_positions", True)),
            standardize_signals=bool(data.get("standardize_signals", False)),
            masks=list(masks),
            node_stats={int(k): ColumnStats(*v) for k, v in data.get("node_stats", {}).items()},
            edge_stats={int(k): ColumnStats(*v) for k, v in data.get("edge_stats", {}).items()},
        )
