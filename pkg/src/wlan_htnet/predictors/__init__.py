"""Throughput predictors: HTNet, baselines and reference predictors"""

from .base import ThroughputPredictor, target_batch, target_rows
from .htnet import HtnetPredictor
from .mlp import MLP_INPUT_DIM, MlpConfig, MlpPredictor, init_mlp, mlp_forward, mlp_inputs
from .reference import LabelOracle, MeanPredictor
from .registry import PREDICTORS, load_predictor
from .sinr import SinrPredictor, capacity_units, fit_gamma, sinr_predict

__all__ = [
    "MLP_INPUT_DIM",
    "PREDICTORS",
    "HtnetPredictor",
    "LabelOracle",
    "MeanPredictor",
    "MlpConfig",
    "MlpPredictor",
    "SinrPredictor",
    "ThroughputPredictor",
    "capacity_units",
    "fit_gamma",
    "init_mlp",
    "load_predictor",
    "mlp_forward",
    "mlp_inputs",
    "sinr_predict",
    "target_batch",
    "target_rows",
]
