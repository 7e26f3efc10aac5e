"""
Per-STA feed-forward regressor over the STA's own node and link features.

Ignores graph structure and time: every target row is regressed from the
21 node features concatenated with the 4 features of its STA->AP edge.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..autodiff import Tape, Tensor, ops
from ..exceptions import CheckpointError, EmptyTargetError
from ..graph.batch import GraphBatch
from ..graph.model import EDGE_FEATURE_DIM, NODE_FEATURE_DIM, DeploymentSequence
from ..nn.checkpoint import Checkpoint, save_checkpoint
from ..nn.params import glorot
from ..training.metrics import rmse
from ..training.optim import Adam
from .base import ThroughputPredictor, target_batch

logger = logging.getLogger(__name__)

MLP_INPUT_DIM = NODE_FEATURE_DIM + EDGE_FEATURE_DIM


class MlpConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hidden: int = Field(64, ge=1)
    depth: int = Field(2, ge=1)
    learning_rate: float = Field(1e-3, gt=0.0)
    epochs: int = Field(100, ge=0)
    batch_size: int = Field(256, ge=1)
    seed: int = Field(0, ge=0)


def mlp_inputs(batch: GraphBatch, rows: np.ndarray) -> np.ndarray:
    """Node row plus its STA->AP edge row; zeros when the STA has no link edge"""
    edges = batch.sta_edge[rows]
    link = np.zeros((rows.size, EDGE_FEATURE_DIM))
    has_link = edges >= 0
    link[has_link] = batch.edge_features[edges[has_link]]
    return np.hstack([batch.node_features[rows], link])


def init_mlp(rng: np.random.Generator, input_width: int, hidden: int, depth: int) -> List[Tuple[Tensor, Tensor]]:
    layers = []
    width = input_width
    for k in range(depth + 1):
        out = 1 if k == depth else hidden
        layers.append(
            (
                Tensor.parameter(glorot(rng, width, out), f"mlp.{k}.W"),
                Tensor.parameter(np.zeros((1, out)), f"mlp.{k}.b"),
            )
        )
        width = out
    return layers


def mlp_forward(x: Tensor, layers: Sequence[Tuple[Tensor, Tensor]]) -> Tensor:
    """ReLU hidden layers and a softplus output, so predictions stay positive"""
    h = x
    for W, b in layers[:-1]:
        h = ops.relu(ops.add(ops.matmul(h, W), b))
    W, b = layers[-1]
    return ops.softplus(ops.add(ops.matmul(h, W), b))


class MlpPredictor(ThroughputPredictor):
    name = "mlp"

    def __init__(self, config: Optional[MlpConfig] = None) -> None:
        super().__init__()
        self.mlp_config = config or MlpConfig()
        rng = np.random.default_rng(self.mlp_config.seed)
        self.layers = init_mlp(rng, MLP_INPUT_DIM, self.mlp_config.hidden, self.mlp_config.depth)
        self.mean = np.zeros((1, MLP_INPUT_DIM))
        self.std = np.ones((1, MLP_INPUT_DIM))

    def _inputs(self, deployments: Sequence[DeploymentSequence]) -> Tuple[np.ndarray, np.ndarray]:
        batch, rows, labels = target_batch(deployments)
        return (mlp_inputs(batch, rows) - self.mean) / self.std, labels

    def named_parameters(self) -> Dict[str, Tensor]:
        return {t.name: t for layer in self.layers for t in layer}

    def fit(
        self,
        train: Sequence[DeploymentSequence],
        val: Optional[Sequence[DeploymentSequence]] = None,
    ) -> None:
        cfg = self.mlp_config
        batch, rows, labels = target_batch(train)
        if labels.size == 0:
            raise EmptyTargetError("no training targets for the MLP")
        raw = mlp_inputs(batch, rows)
        self.mean = raw.mean(axis=0, keepdims=True)
        std = raw.std(axis=0, keepdims=True)
        self.std = np.where(std > 0, std, 1.0)
        x = (raw - self.mean) / self.std
        val_x, val_y = self._inputs(val) if val else (None, None)

        optimizer = Adam(self.named_parameters(), lr=cfg.learning_rate)
        rng = np.random.default_rng(cfg.seed)
        best: Optional[float] = None
        best_state: Optional[Dict[str, np.ndarray]] = None
        for epoch in range(1, cfg.epochs + 1):
            order = rng.permutation(labels.size)
            for start in range(0, labels.size, cfg.batch_size):
                idx = order[start : start + cfg.batch_size]
                with Tape() as tape:
                    pred = mlp_forward(Tensor(x[idx]), self.layers)
                    loss = ops.mse(pred, labels[idx].reshape(-1, 1))
                optimizer.step(tape.backward(loss))
            if val_x is not None and val_y is not None and val_y.size:
                score = rmse(val_y, self._forward(val_x))
                if best is None or score < best:
                    best = score
                    best_state = {k: t.value.copy() for k, t in self.named_parameters().items()}
            if epoch % 10 == 0 or epoch == cfg.epochs:
                logger.debug(f"mlp epoch {epoch}: train RMSE {rmse(labels, self._forward(x)):.4f}")
        if best_state is not None:
            for k, t in self.named_parameters().items():
                t.value = best_state[k]
        logger.info(f"MLP baseline fitted on {labels.size} targets")

    def _forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[0] == 0:
            return np.zeros(0)
        return mlp_forward(Tensor(x), self.layers).value.reshape(-1).copy()

    def predict(self, deployments: Sequence[DeploymentSequence]) -> np.ndarray:
        x, _ = self._inputs(deployments)
        return self._forward(x)

    def parameter_count(self) -> int:
        return sum(t.size for t in self.named_parameters().values())

    def save(self, path: Union[str, Path]) -> Path:
        tensors = {k: t.value for k, t in self.named_parameters().items()}
        tensors["input.mean"] = self.mean
        tensors["input.std"] = self.std
        header = {"predictor": self.name, "mlp_config": self.mlp_config.model_dump(mode="json")}
        return save_checkpoint(path, header, tensors)

    @classmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> "MlpPredictor":
        if checkpoint.predictor != cls.name:
            raise CheckpointError(f"checkpoint holds a {checkpoint.predictor!r} predictor, not 'mlp'")
        try:
            config = MlpConfig.model_validate(checkpoint.header.get("mlp_config", {}))
        except ValidationError as e:
            raise CheckpointError(f"MLP checkpoint header does not match this version: {e}") from e
        predictor = cls(config)
        try:
            for k, t in predictor.named_parameters().items():
                value = np.asarray(checkpoint.tensors[k])
                if value.shape != t.shape:
                    raise ValueError(f"{k}: shape {value.shape} != {t.shape}")
                t.value = value
            predictor.mean = np.asarray(checkpoint.tensors["input.mean"])
            predictor.std = np.asarray(checkpoint.tensors["input.std"])
        except (KeyError, ValueError) as e:
            raise CheckpointError(f"MLP checkpoint tensors do not match its config: {e}") from e
        return predictor
