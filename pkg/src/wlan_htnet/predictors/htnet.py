"""
HTNet behind the common predictor interface
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ..graph.dataset import DatasetSplits
from ..graph.model import DeploymentSequence
from ..nn.checkpoint import Checkpoint
from ..nn.model import HtnetModel
from ..training.config import TrainConfig
from ..training.trainer import TrainingHistory, train
from .base import ThroughputPredictor

logger = logging.getLogger(__name__)


class HtnetPredictor(ThroughputPredictor):
    """Trains an :class:`HtnetModel` with :func:`train` and predicts with it"""

    name = "htnet"

    def __init__(self, config: Optional[TrainConfig] = None, model: Optional[HtnetModel] = None) -> None:
        super().__init__()
        self.train_config = config or TrainConfig()
        self.model = model or HtnetModel(self.train_config.model, seed=self.train_config.seed)
        self.history = TrainingHistory()

    def fit(
        self,
        train_split: Sequence[DeploymentSequence],
        val: Optional[Sequence[DeploymentSequence]] = None,
    ) -> None:
        splits = DatasetSplits(train=list(train_split), val=list(val or []), test=[])
        result = train(splits, self.train_config, model=self.model)
        self.model = result.model
        self.history = result.history

    def predict(self, deployments: Sequence[DeploymentSequence]) -> np.ndarray:
        return self.model.predict(deployments)

    def parameter_count(self) -> int:
        return self.model.parameter_count()

    def save(self, path: Union[str, Path]) -> Path:
        return self.model.save(path)

    @classmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> "HtnetPredictor":
        model = HtnetModel.from_checkpoint(checkpoint)
        return cls(TrainConfig(model=model.config), model=model)
