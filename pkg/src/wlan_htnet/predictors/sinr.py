"""
Single-link capacity baseline: ``y = gamma * log2(1 + SINR)``
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from ..exceptions import CheckpointError
from ..graph.features import SINR_COL
from ..graph.model import DeploymentSequence
from ..nn.checkpoint import Checkpoint, save_checkpoint
from ..scenarios.config import db_to_linear
from .base import ThroughputPredictor, target_batch

logger = logging.getLogger(__name__)


def capacity_units(sinr_linear: npt.ArrayLike) -> np.ndarray:
    """``log2(1 + SINR)`` for a linear SINR"""
    return np.log2(1.0 + np.asarray(sinr_linear, dtype=np.float64))


def sinr_predict(sinr_linear: npt.ArrayLike, gamma: float = 1.0) -> np.ndarray:
    return gamma * capacity_units(sinr_linear)


def fit_gamma(sinr_linear: npt.ArrayLike, labels: npt.ArrayLike) -> float:
    """Least-squares scale through the origin, ``sum(y x) / sum(x^2)``"""
    x = capacity_units(sinr_linear).reshape(-1)
    y = np.asarray(labels, dtype=np.float64).reshape(-1)
    denom = float(np.dot(x, x))
    if denom == 0.0:
        logger.warning("All training SINRs are zero; gamma left at 0")
        return 0.0
    return float(np.dot(x, y) / denom)


class SinrPredictor(ThroughputPredictor):
    """Time-blind, graph-blind capacity baseline with one fitted scale"""

    name = "sinr"

    def __init__(self, gamma: float = 1.0) -> None:
        self.gamma = gamma

    @staticmethod
    def _sinr_linear(deployments: Sequence[DeploymentSequence]) -> Tuple[np.ndarray, np.ndarray]:
        batch, rows, labels = target_batch(deployments)
        return db_to_linear(batch.node_features[rows, SINR_COL]), labels

    def fit(
        self,
        train: Sequence[DeploymentSequence],
        val: Optional[Sequence[DeploymentSequence]] = None,
    ) -> None:
        sinr, labels = self._sinr_linear(train)
        self.gamma = fit_gamma(sinr, labels)
        logger.info(f"SINR baseline fitted on {labels.size} targets: gamma = {self.gamma:.4f}")

    def predict(self, deployments: Sequence[DeploymentSequence]) -> np.ndarray:
        sinr, _ = self._sinr_linear(deployments)
        return sinr_predict(sinr, self.gamma)

    def parameter_count(self) -> int:
        return 1

    def save(self, path: Union[str, Path]) -> Path:
        return save_checkpoint(
            path, {"predictor": self.name}, {"gamma": np.array([[self.gamma]])}
        )

    @classmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> "SinrPredictor":
        if checkpoint.predictor != cls.name:
            raise CheckpointError(f"checkpoint holds a {checkpoint.predictor!r} predictor, not 'sinr'")
        if "gamma" not in checkpoint.tensors:
            raise CheckpointError("SINR checkpoint has no 'gamma' tensor")
        return cls(gamma=float(np.asarray(checkpoint.tensors["gamma"]).reshape(-1)[0]))

