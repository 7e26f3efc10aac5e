"""
Supervised training loop for HTNet
"""

import csv
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from ..autodiff import Tape, set_default_dtype
from ..exceptions import TrainingDivergedError
from ..graph.batch import build_batch
from ..graph.dataset import DatasetSplits
from ..graph.model import DeploymentSequence
from ..nn.model import HtnetModel
from ..nn.temporal import batch_targets, rmse_loss
from .config import TrainConfig
from .optim import Adam

logger = logging.getLogger(__name__)


@dataclass
class EpochRecord:
    epoch: int
    train_rmse: float
    val_rmse: Optional[float]
    seconds: float


@dataclass
class TrainingHistory:
    records: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def train_rmse(self) -> List[float]:
        return [r.train_rmse for r in self.records]

    @property
    def val_rmse(self) -> List[Optional[float]]:
        return [r.val_rmse for r in self.records]

    def to_csv(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["epoch", "train_rmse", "val_rmse", "seconds"])
            for r in self.records:
                writer.writerow(
                    [r.epoch, repr(r.train_rmse), "" if r.val_rmse is None else repr(r.val_rmse), f"{r.seconds:.4f}"]
                )


@dataclass
class TrainResult:
    model: HtnetModel
    history: TrainingHistory
    best_epoch: Optional[int] = None
    best_val_rmse: Optional[float] = None


def iterate_batches(
    deployments: Sequence[DeploymentSequence], batch_size: int, rng: np.random.Generator
) -> List[List[DeploymentSequence]]:
    order = rng.permutation(len(deployments))
    return [
        [deployments[i] for i in order[start : start + batch_size]]
        for start in range(0, len(order), batch_size)
    ]


def validation_rmse(model: HtnetModel, deployments: Sequence[DeploymentSequence]) -> Optional[float]:
    if not deployments:
        return None
    batch = model.prepare(deployments)
    if batch.num_targets == 0:
        return None
    pred = model.forward(batch).predictions.value.reshape(-1)
    return float(np.sqrt(np.mean((pred - batch_targets(batch)) ** 2)))


def train(
    splits: DatasetSplits,
    config: Optional[TrainConfig] = None,
    model: Optional[HtnetModel] = None,
) -> TrainResult:
    """Fit HTNet on ``splits.train`` and keep the best-validation parameters.

    Each mini-batch of whole deployments is one tape, so batch-norm
    statistics cover every node of the batch. Raises
    :class:`TrainingDivergedError` when the loss stops being finite.
    """
    config = config or TrainConfig()
    set_default_dtype(config.dtype)
    model = model or HtnetModel(config.model, seed=config.seed)
    model.split = splits.ids()
    history = TrainingHistory()
    if not splits.train:
        logger.warning("Training split is empty; returning the initialized model")
        return TrainResult(model=model, history=history)

    model.fit_scaler(build_batch(splits.train))
    params = model.params.named_parameters()
    optimizer = Adam(
        params,
        lr=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        eps=config.adam_eps,
        weight_decay=config.weight_decay,
    )
    rng = np.random.default_rng(config.seed)
    best_state: Optional[Dict[str, np.ndarray]] = None
    best_epoch: Optional[int] = None
    best_val: Optional[float] = None

    for epoch in range(1, config.epochs + 1):
        started = time.perf_counter()
        squared, count = 0.0, 0
        for members in iterate_batches(splits.train, config.batch_size, rng):
            batch = model.prepare(members)
            if batch.num_targets == 0:
                continue
            with Tape(check_finite=config.check_finite) as tape:
                out = model.forward(batch, training=True, rng=rng)
                loss = rmse_loss(out.predictions, batch_targets(batch))
            value = loss.item()
            if not np.isfinite(value):
                raise TrainingDivergedError(epoch, f"loss became {value}")
            optimizer.step(tape.backward(loss))
            squared += value * value * batch.num_targets
            count += batch.num_targets

        train_rmse = float(np.sqrt(squared / count)) if count else float("nan")
        val_rmse = validation_rmse(model, splits.val)
        if val_rmse is not None and not np.isfinite(val_rmse):
            raise TrainingDivergedError(epoch, "validation predictions are not finite")
        elapsed = time.perf_counter() - started
        history.records.append(EpochRecord(epoch, train_rmse, val_rmse, elapsed))
        logger.info(
            f"epoch {epoch}/{config.epochs}: train RMSE {train_rmse:.4f}"
            + (f", val RMSE {val_rmse:.4f}" if val_rmse is not None else "")
            + f" ({elapsed:.1f}s)"
        )
        if val_rmse is not None and (best_val is None or val_rmse < best_val):
            best_val, best_epoch = val_rmse, epoch
            best_state = model.params.state_dict()

    if best_state is not None:
        model.params.load_state_dict(best_state)
        logger.info(f"Restored best validation epoch {best_epoch} (val RMSE {best_val:.4f})")
    return TrainResult(model=model, history=history, best_epoch=best_epoch, best_val_rmse=best_val)
