"""
Per-STA LSTM over snapshot embeddings, the softplus head, the RMSE loss and
full HTNet assembly.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from ..autodiff import Tensor, ops
from ..exceptions import EmptyTargetError, ShapeError
from ..graph.batch import GraphBatch, build_batch
from ..graph.model import DeploymentSequence
from .config import LstmActivation
from .htl import encode
from .params import HeadParams, HtnetParams, LstmLayerParams

logger = logging.getLogger(__name__)


def _gate(x: Tensor, h_prev: Tensor, layer: LstmLayerParams, g: str) -> Tensor:
    return x @ layer.W[g] + h_prev @ layer.U[g] + layer.b[g]


def lstm_step(
    x: Tensor,
    h_prev: Tensor,
    c_prev: Tensor,
    layer: LstmLayerParams,
    activation: LstmActivation = LstmActivation.SIGMOID,
) -> Tuple[Tensor, Tensor]:
    """Advance every row (one node each) by one time step.

    The candidate and the cell output use ``activation``; the sigmoid
    default mirrors the gate nonlinearity, ``tanh`` gives the usual cell.
    """
    if h_prev.shape != c_prev.shape or x.shape[0] != h_prev.shape[0]:
        raise ShapeError("lstm_step", x.shape, h_prev.shape)
    squash = ops.sigmoid if activation is LstmActivation.SIGMOID else ops.tanh
    f = ops.sigmoid(_gate(x, h_prev, layer, "f"))
    i = ops.sigmoid(_gate(x, h_prev, layer, "i"))
    o = ops.sigmoid(_gate(x, h_prev, layer, "o"))
    candidate = squash(_gate(x, h_prev, layer, "c"))
    c = f * c_prev + i * candidate
    h = o * squash(c)
    return h, c


def predict_head(h: Tensor, head: HeadParams) -> Tensor:
    """Strictly positive throughput estimate ``softplus(h W_y)``"""
    return ops.softplus(h @ head.W_y)


def rmse_loss(pred: Tensor, target: Union[np.ndarray, Tensor]) -> Tensor:
    """Root of the mean squared error over every (STA, time) pair"""
    if pred.size == 0:
        raise EmptyTargetError("RMSE over an empty set of targets")
    target_value = target.value if isinstance(target, Tensor) else np.asarray(target)
    target_value = target_value.reshape(pred.shape).astype(pred.value.dtype)
    return ops.sqrt(ops.mse(pred, target_value))


@dataclass
class HtnetOutput:
    """Predictions for the active targets of a batch, in (t, track) order"""

    predictions: Tensor
    steps: np.ndarray
    tracks: np.ndarray

    def as_matrix(self, num_steps: int, num_tracks: int) -> np.ndarray:
        out = np.full((num_steps, num_tracks), np.nan)
        out[self.steps, self.tracks] = self.predictions.value.reshape(-1)
        return out


def _select(mask_column: np.ndarray, new: Tensor, old: Tensor) -> Tensor:
    return new * mask_column + old * (1.0 - mask_column)


def htnet_forward(
    data: Union[GraphBatch, DeploymentSequence],
    params: HtnetParams,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> HtnetOutput:
    """Run the whole model over every snapshot of a batch.

    The HTL stack encodes all snapshots at once; the LSTM then walks the time
    axis. A track's state is frozen while its STA is detached and resumes on
    reattachment, so predictions at ``t`` only depend on snapshots ``<= t``.
    """
    batch = build_batch([data]) if isinstance(data, DeploymentSequence) else data
    config = params.config
    if batch.num_targets == 0:
        raise EmptyTargetError("batch has no target STAs to predict")

    embedding = encode(batch, params.htl, params.jk, config, training, rng)
    active = batch.target_mask
    steps, tracks = np.nonzero(active)

    if params.lstm is None:
        rows = batch.track_rows[steps, tracks]
        pred = predict_head(ops.gather_rows(embedding, rows), params.head)
        return HtnetOutput(pred, steps, tracks)

    dtype = embedding.value.dtype
    num_tracks = batch.num_tracks
    hidden = [ops.zeros(num_tracks, layer.hidden) for layer in params.lstm.layers]
    cells = [ops.zeros(num_tracks, layer.hidden) for layer in params.lstm.layers]
    per_step: List[Tensor] = []
    for t in range(batch.num_steps):
        present = active[t]
        if not present.any():
            continue
        mask = present.astype(dtype).reshape(-1, 1)
        rows = np.where(present, batch.track_rows[t], 0)
        x = ops.gather_rows(embedding, rows) * mask
        for depth, layer in enumerate(params.lstm.layers):
            h_new, c_new = lstm_step(x, hidden[depth], cells[depth], layer, config.lstm_activation)
            hidden[depth] = _select(mask, h_new, hidden[depth])
            cells[depth] = _select(mask, c_new, cells[depth])
            x = hidden[depth]
        y = predict_head(x, params.head)
        per_step.append(ops.gather_rows(y, np.flatnonzero(present)))
    return HtnetOutput(ops.concat(per_step, axis=0), steps, tracks)


def batch_targets(batch: GraphBatch) -> np.ndarray:
    """Labels of the active targets in the same order as :class:`HtnetOutput`"""
    steps, tracks = np.nonzero(batch.target_mask)
    return batch.labels[steps, tracks]
