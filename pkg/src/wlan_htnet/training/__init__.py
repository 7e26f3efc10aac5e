"""
Training loop, optimizer, metrics, evaluation and studies
"""

from .config import TrainConfig
from .evaluation import EvalReport, SupportsPredict, evaluate
from .metrics import mae, rmse
from .optim import Adam
from .studies import AblationRow, DepthRow, depth_study, feature_ablation
from .trainer import (
    EpochRecord,
    TrainingHistory,
    TrainResult,
    iterate_batches,
    train,
    validation_rmse,
)

__all__ = [
    "AblationRow",
    "Adam",
    "DepthRow",
    "EpochRecord",
    "EvalReport",
    "SupportsPredict",
    "TrainConfig",
    "TrainResult",
    "TrainingHistory",
    "depth_study",
    "evaluate",
    "feature_ablation",
    "iterate_batches",
    "mae",
    "rmse",
    "train",
    "validation_rmse",
]
