"""
Core module: benchmark orchestration across predictors and datasets
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Optional, Sequence

from .graph.dataset import DatasetSplits
from .predictors.base import ThroughputPredictor
from .training.evaluation import EvalReport, evaluate

logger = logging.getLogger(__name__)


@dataclass
class ComparisonResult:
    """Reports of every predictor on one dataset's test split"""

    dataset: str
    reports: List[EvalReport]
    timestamp: datetime = field(default_factory=datetime.now)

    @property
    def ranking(self) -> List[str]:
        return [r.predictor for r in sorted(self.reports, key=lambda r: r.rmse)]

    @property
    def best(self) -> Optional[EvalReport]:
        return min(self.reports, key=lambda r: r.rmse) if self.reports else None

    def summary(self) -> str:
        if not self.reports:
            return f"No predictors were evaluated on {self.dataset}."
        lines = [f"Test results on {self.dataset} ({self.reports[0].targets} targets):"]
        for r in sorted(self.reports, key=lambda r: r.rmse):
            lines.append(
                f"- {r.predictor}: RMSE {r.rmse:.3f} Mbps, MAE {r.mae:.3f} Mbps, "
                f"{r.parameter_count} parameters"
            )
        return "\n".join(lines)


class ThroughputBenchmark:
    """
    Fits registered predictors on registered datasets and compares them
    on the test split
    """

    def __init__(self, threads: Optional[int] = None) -> None:
        self.predictors: Dict[str, ThroughputPredictor] = {}
        self.datasets: Dict[str, DatasetSplits] = {}
        self.threads = threads

    def register_predictor(self, name: str, predictor: ThroughputPredictor) -> None:
        self.predictors[name] = predictor

    def register_dataset(self, name: str, splits: DatasetSplits) -> None:
        self.datasets[name] = splits

    def _dataset(self, name: str) -> DatasetSplits:
        if name not in self.datasets:
            raise ValueError(f"Dataset {name} not registered")
        return self.datasets[name]

    def _predictor(self, name: str) -> ThroughputPredictor:
        if name not in self.predictors:
            raise ValueError(f"Predictor {name} not registered")
        return self.predictors[name]

    def fit(self, predictor_name: str, dataset_name: str) -> ThroughputPredictor:
        splits = self._dataset(dataset_name)
        predictor = self._predictor(predictor_name)
        logger.info(f"Fitting {predictor_name} on {dataset_name} ({len(splits.train)} deployments)")
        predictor.fit(splits.train, splits.val)
        return predictor

    def evaluate(self, predictor_name: str, dataset_name: str) -> EvalReport:
        splits = self._dataset(dataset_name)
        report = evaluate(self._predictor(predictor_name), splits.test, threads=self.threads)
        report.predictor = predictor_name
        return report

    def compare(
        self,
        dataset_name: str,
        predictor_names: Optional[Sequence[str]] = None,
        fit: bool = True,
    ) -> ComparisonResult:
        """Fit (unless ``fit`` is off) and evaluate each predictor in turn"""
        self._dataset(dataset_name)
        names = list(predictor_names) if predictor_names else list(self.predictors)
        reports = []
        for name in names:
            if fit:
                self.fit(name, dataset_name)
            reports.append(self.evaluate(name, dataset_name))
        return ComparisonResult(dataset=dataset_name, reports=reports)
