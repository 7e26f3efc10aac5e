"""
Checkpoint dispatch by the ``predictor`` header field
"""

from pathlib import Path
from typing import Dict, Type, Union

from ..exceptions import CheckpointError
from ..nn.checkpoint import load_checkpoint
from .base import ThroughputPredictor
from .htnet import HtnetPredictor
from .mlp import MlpPredictor
from .reference import LabelOracle, MeanPredictor
from .sinr import SinrPredictor

PREDICTORS: Dict[str, Type[ThroughputPredictor]] = {
    cls.name: cls
    for cls in (HtnetPredictor, SinrPredictor, MlpPredictor, LabelOracle, MeanPredictor)
}


def load_predictor(path: Union[str, Path]) -> ThroughputPredictor:
    checkpoint = load_checkpoint(path)
    kind = checkpoint.predictor
    if kind not in PREDICTORS:
        raise CheckpointError(f"{path}: unknown predictor {kind!r}; expected one of {sorted(PREDICTORS)}")
    return PREDICTORS[kind].from_checkpoint(checkpoint)
