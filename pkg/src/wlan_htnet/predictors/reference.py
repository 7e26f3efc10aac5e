"""
Reference predictors bounding the error scale: label echo and constant mean
"""

from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ..exceptions import CheckpointError, EmptyTargetError
from ..graph.model import DeploymentSequence
from ..nn.checkpoint import Checkpoint, save_checkpoint
from .base import ThroughputPredictor, target_batch


class LabelOracle(ThroughputPredictor):
    """Returns the stored labels; any sane metric scores it as zero error"""

    name = "oracle"

    def fit(
        self,
        train: Sequence[DeploymentSequence],
        val: Optional[Sequence[DeploymentSequence]] = None,
    ) -> None:
        pass

    def predict(self, deployments: Sequence[DeploymentSequence]) -> np.ndarray:
        _, _, labels = target_batch(deployments)
        return labels.copy()

    def parameter_count(self) -> int:
        return 0

    def save(self, path: Union[str, Path]) -> Path:
        return save_checkpoint(path, {"predictor": self.name}, {})

    @classmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> "LabelOracle":
        if checkpoint.predictor != cls.name:
            raise CheckpointError(f"checkpoint holds a {checkpoint.predictor!r} predictor, not 'oracle'")
        return cls()


class MeanPredictor(ThroughputPredictor):
    """Predicts the training-label mean everywhere"""

    name = "mean"

    def __init__(self, mean: float = 0.0) -> None:
        super().__init__()
        self.mean = mean

    def fit(
        self,
        train: Sequence[DeploymentSequence],
        val: Optional[Sequence[DeploymentSequence]] = None,
    ) -> None:
        _, _, labels = target_batch(train)
        if labels.size == 0:
            raise EmptyTargetError("no training targets to average")
        self.mean = float(labels.mean())

    def predict(self, deployments: Sequence[DeploymentSequence]) -> np.ndarray:
        _, rows, _ = target_batch(deployments)
        return np.full(rows.size, self.mean)

    def parameter_count(self) -> int:
        return 1

    def save(self, path: Union[str, Path]) -> Path:
        return save_checkpoint(path, {"predictor": self.name}, {"mean": np.array([[self.mean]])})

    @classmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> "MeanPredictor":
        if checkpoint.predictor != cls.name or "mean" not in checkpoint.tensors:
            raise CheckpointError("not a mean-predictor checkpoint")
        return cls(mean=float(np.asarray(checkpoint.tensors["mean"]).reshape(-1)[0]))
