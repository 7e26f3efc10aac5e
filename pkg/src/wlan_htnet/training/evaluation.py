"""
Test-split evaluation: error metrics, per-setup breakdown and inference timing
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ..exceptions import EmptyTargetError
from ..graph.batch import build_batch
from ..graph.model import DeploymentSequence
from ..nn.temporal import batch_targets
from .metrics import mae, rmse

logger = logging.getLogger(__name__)


class SupportsPredict(Protocol):
    """Anything that maps deployments to per-target throughput predictions"""

    @property
    def name(self) -> str: ...

    def predict(self, deployments: Sequence[DeploymentSequence]) -> np.ndarray: ...

    def parameter_count(self) -> int: ...


@dataclass
class EvalReport:
    predictor: str
    rmse: float
    mae: float
    targets: int
    deployments: int
    per_setup: Dict[int, Dict[str, float]] = field(default_factory=dict)
    per_snapshot_rmse: List[float] = field(default_factory=list)
    inference_ms_per_sequence: float = 0.0
    parameter_count: int = 0

    def as_dict(self) -> Dict[str, Any]:
        return {
            "predictor": self.predictor,
            "rmse": self.rmse,
            "mae": self.mae,
            "targets": self.targets,
            "deployments": self.deployments,
            "per_setup": {str(k): v for k, v in sorted(self.per_setup.items())},
            "per_snapshot_rmse": self.per_snapshot_rmse,
            "inference_ms_per_sequence": self.inference_ms_per_sequence,
            "parameter_count": self.parameter_count,
        }


@dataclass
class _SequenceResult:
    setup: int
    steps: np.ndarray
    labels: np.ndarray
    predictions: np.ndarray
    seconds: float


def _run_one(predictor: SupportsPredict, deployment: DeploymentSequence) -> _SequenceResult:
    batch = build_batch([deployment])
    steps = np.nonzero(batch.target_mask)[0]
    labels = batch_targets(batch)
    started = time.perf_counter()
    predictions = np.asarray(predictor.predict([deployment]), dtype=np.float64).reshape(-1)
    elapsed = time.perf_counter() - started
    if predictions.shape != labels.shape:
        raise ValueError(
            f"{predictor.name} returned {predictions.size} predictions for "
            f"{labels.size} targets in deployment {deployment.id}"
        )
    return _SequenceResult(deployment.setup, steps, labels, predictions, elapsed)


def _group_rmse(results: Sequence[_SequenceResult]) -> Tuple[Dict[int, Dict[str, float]], List[float]]:
    per_setup: Dict[int, Dict[str, float]] = {}
    for setup in sorted({r.setup for r in results}):
        members = [r for r in results if r.setup == setup and r.labels.size]
        if not members:
            continue
        y = np.concatenate([r.labels for r in members])
        y_hat = np.concatenate([r.predictions for r in members])
        per_setup[setup] = {"rmse": rmse(y, y_hat), "mae": mae(y, y_hat), "targets": float(y.size)}

    steps = np.concatenate([r.steps for r in results])
    errors = np.concatenate([r.predictions - r.labels for r in results])
    per_snapshot = []
    for t in range(int(steps.max()) + 1 if steps.size else 0):
        e = errors[steps == t]
        per_snapshot.append(float(np.sqrt(np.mean(e * e))) if e.size else float("nan"))
    return per_setup, per_snapshot


def evaluate(
    predictor: SupportsPredict,
    deployments: Sequence[DeploymentSequence],
    threads: Optional[int] = None,
) -> EvalReport:
    """Score ``predictor`` over every target (STA, time) pair of ``deployments``.

    Each deployment is predicted on its own so the timing is per sequence.
    Timings are only meaningful with ``threads=1``.
    """
    if not deployments:
        raise EmptyTargetError("cannot evaluate on an empty split")
    if threads is None or threads <= 1:
        results = [_run_one(predictor, dep) for dep in deployments]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda dep: _run_one(predictor, dep), deployments))

    y = np.concatenate([r.labels for r in results])
    y_hat = np.concatenate([r.predictions for r in results])
    per_setup, per_snapshot = _group_rmse(results)
    report = EvalReport(
        predictor=predictor.name,
        rmse=rmse(y, y_hat),
        mae=mae(y, y_hat),
        targets=int(y.size),
        deployments=len(deployments),
        per_setup=per_setup,
        per_snapshot_rmse=per_snapshot,
        inference_ms_per_sequence=1000.0 * float(np.mean([r.seconds for r in results])),
        parameter_count=predictor.parameter_count(),
    )
    logger.info(
        f"{report.predictor}: RMSE {report.rmse:.4f}, MAE {report.mae:.4f} over "
        f"{report.targets} targets ({report.inference_ms_per_sequence:.2f} ms/sequence)"
    )
    return report
