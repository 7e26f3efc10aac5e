"""
HTNet model bundle: configuration, parameters and input scaler
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from ..exceptions import CheckpointError
from ..graph.batch import GraphBatch, build_batch
from ..graph.model import DeploymentSequence
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .config import ModelConfig
from .params import HtnetParams, init_params
from .scaling import FeatureScaler
from .temporal import HtnetOutput, htnet_forward

logger = logging.getLogger(__name__)


class HtnetModel:
    """Everything needed to run HTNet on raw (unscaled) batches"""

    predictor_name = "htnet"

    @property
    def name(self) -> str:
        return self.predictor_name

    def __init__(
        self,
        config: Optional[ModelConfig] = None,
        seed: int = 0,
        params: Optional[HtnetParams] = None,
        scaler: Optional[FeatureScaler] = None,
    ) -> None:
        self.config = config or ModelConfig()
        self.params = params or init_params(self.config, seed)
        self.scaler = scaler or FeatureScaler.from_config(self.config)
        self.split: Optional[Dict[str, Any]] = None

    def fit_scaler(self, batch: GraphBatch) -> None:
        self.scaler.fit(batch)

    def prepare(self, data: Union[GraphBatch, Sequence[DeploymentSequence]]) -> GraphBatch:
        batch = data if isinstance(data, GraphBatch) else build_batch(data)
        return self.scaler.transform(batch)

    def forward(
        self,
        batch: GraphBatch,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> HtnetOutput:
        """Forward pass over an already prepared (scaled) batch"""
        return htnet_forward(batch, self.params, training=training, rng=rng)

    def predict(self, data: Union[GraphBatch, Sequence[DeploymentSequence]]) -> np.ndarray:
        """Predictions in target order, evaluation mode"""
        batch = self.prepare(data)
        if batch.num_targets == 0:
            return np.zeros(0)
        return self.forward(batch).predictions.value.reshape(-1).copy()

    def parameter_count(self) -> int:
        return self.params.parameter_count()

    def save(self, path: Union[str, Path]) -> Path:
        header = {
            "predictor": self.predictor_name,
            "model_config": self.config.model_dump(mode="json"),
            "scaler": self.scaler.to_dict(),
            "split": self.split,
        }
        return save_checkpoint(path, header, self.params.state_dict())

    @classmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> "HtnetModel":
        if checkpoint.predictor != cls.predictor_name:
            raise CheckpointError(
                f"checkpoint holds a {checkpoint.predictor!r} predictor, not {cls.predictor_name!r}"
            )
        try:
            config = ModelConfig.model_validate(checkpoint.header.get("model_config", {}))
            scaler = FeatureScaler.from_dict(checkpoint.header.get("scaler"))
        except (ValidationError, ValueError) as e:
            raise CheckpointError(f"checkpoint header does not match this version: {e}") from e
        model = cls(config=config, scaler=scaler)
        try:
            model.params.load_state_dict(checkpoint.tensors)
        except (KeyError, ValueError) as e:
            raise CheckpointError(f"checkpoint tensors do not match the model config: {e}") from e
        model.split = checkpoint.header.get("split")
        return model

    @classmethod
    def load(cls, path: Union[str, Path]) -> "HtnetModel":
        return cls.from_checkpoint(load_checkpoint(path))
