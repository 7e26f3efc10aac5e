"""
wlan-htnet

Per-station throughput prediction for dynamic WLANs with a heterogeneous
temporal graph neural network, plus the synthetic deployments, baselines
and expressiveness checks around it.
"""

__version__ = "0.1.0"

from .core import ComparisonResult, ThroughputBenchmark
from .graph import DeploymentSequence, Snapshot, build_batch, read_dataset, write_dataset
from .nn import HtnetModel, ModelConfig
from .predictors import HtnetPredictor, MlpPredictor, SinrPredictor, load_predictor
from .scenarios import ScenarioConfig, generate
from .training import EvalReport, TrainConfig, evaluate, train

__all__ = [
    "ComparisonResult",
    "DeploymentSequence",
    "EvalReport",
    "HtnetModel",
    "HtnetPredictor",
    "MlpPredictor",
    "ModelConfig",
    "ScenarioConfig",
    "SinrPredictor",
    "Snapshot",
    "ThroughputBenchmark",
    "TrainConfig",
    "build_batch",
    "evaluate",
    "generate",
    "load_predictor",
    "read_dataset",
    "train",
    "write_dataset",
]
