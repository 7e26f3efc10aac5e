"""
Layer-depth and input-feature ablation studies
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

from ..exceptions import ConfigError
from ..graph.dataset import DatasetSplits
from ..nn.config import FEATURE_GROUPS
from .config import TrainConfig
from .evaluation import evaluate
from .trainer import train

logger = logging.getLogger(__name__)


@dataclass
class DepthRow:
    layers: int
    test_rmse: float
    test_mae: float
    inference_ms: float
    parameter_count: int

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class AblationRow:
    removed: str
    test_rmse: float
    test_mae: float

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def depth_study(
    splits: DatasetSplits,
    depths: Sequence[int] = tuple(range(1, 13)),
    config: Optional[TrainConfig] = None,
) -> List[DepthRow]:
    """Train and test one model per HTL depth with the same seed.

    Timing is taken single-threaded so the rows are comparable.
    """
    config = config or TrainConfig()
    rows: List[DepthRow] = []
    for k in depths:
        run_config = config.model_copy(update={"model": config.model.model_copy(update={"layers": k})})
        logger.info(f"Depth study: training with K={k}")
        result = train(splits, run_config)
        report = evaluate(result.model, splits.test, threads=1)
        rows.append(
            DepthRow(
                layers=k,
                test_rmse=report.rmse,
                test_mae=report.mae,
                inference_ms=report.inference_ms_per_sequence,
                parameter_count=report.parameter_count,
            )
        )
    return rows


def feature_ablation(
    splits: DatasetSplits,
    groups: Sequence[str] = ("sinr", "airtime", "rssi", "channel", "position"),
    config: Optional[TrainConfig] = None,
) -> List[AblationRow]:
    """Test RMSE with every feature group in turn masked out.

    The first row, ``removed == "none"``, is the full-feature reference.
    """
    unknown = [g for g in groups if g not in FEATURE_GROUPS]
    if unknown:
        raise ConfigError(f"unknown feature groups {unknown}; expected a subset of {FEATURE_GROUPS}")
    config = config or TrainConfig()
    rows: List[AblationRow] = []
    for removed in ("none", *groups):
        masks = list(config.model.feature_masks) if removed == "none" else sorted(
            {*config.model.feature_masks, removed}
        )
        run_config = config.model_copy(
            update={"model": config.model.model_copy(update={"feature_masks": masks})}
        )
        logger.info(f"Feature ablation: masking {masks or 'nothing'}")
        result = train(splits, run_config)
        report = evaluate(result.model, splits.test, threads=config.threads)
        rows.append(AblationRow(removed=removed, test_rmse=report.rmse, test_mae=report.mae))
    return rows
