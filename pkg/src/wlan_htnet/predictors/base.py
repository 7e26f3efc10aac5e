"""
Base throughput predictor interface
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..graph.batch import GraphBatch, build_batch
from ..graph.model import DeploymentSequence
from ..nn.checkpoint import Checkpoint


class ThroughputPredictor(ABC):
    """Abstract base class for per-STA throughput predictors.

    ``predict`` returns one value per target (STA, time) pair, in the order
    of ``np.nonzero(build_batch(deployments).target_mask)``.
    """

    name: str = ""

    @abstractmethod
    def fit(
        self,
        train: Sequence[DeploymentSequence],
        val: Optional[Sequence[DeploymentSequence]] = None,
    ) -> None:
        """Fit on the training split; ``val`` is used for model selection when given"""
        pass

    @abstractmethod
    def predict(self, deployments: Sequence[DeploymentSequence]) -> np.ndarray:
        pass

    @abstractmethod
    def parameter_count(self) -> int:
        pass

    @abstractmethod
    def save(self, path: Union[str, Path]) -> Path:
        """Write a checkpoint that :func:`load_predictor` can restore"""
        pass

    @classmethod
    @abstractmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> "ThroughputPredictor":
        pass


def target_rows(batch: GraphBatch) -> Tuple[np.ndarray, np.ndarray]:
    """Node rows and labels of every target, in target order"""
    mask = batch.target_mask
    return batch.track_rows[mask], batch.labels[mask]


def target_batch(deployments: Sequence[DeploymentSequence]) -> Tuple[GraphBatch, np.ndarray, np.ndarray]:
    batch = build_batch(deployments)
    rows, labels = target_rows(batch)
    return batch, rows, labels
