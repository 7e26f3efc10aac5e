"""Reverse-mode automatic differentiation over dense matrices"""

from . import ops
from .gradcheck import GradcheckReport, ParameterCheck, gradcheck
from .ops import BatchNormState
from .tensor import (
    Gradients,
    Tape,
    Tensor,
    current_tape,
    get_default_dtype,
    set_default_dtype,
)

__all__ = [
    "ops",
    "BatchNormState",
    "GradcheckReport",
    "Gradients",
    "ParameterCheck",
    "Tape",
    "Tensor",
    "current_tape",
    "get_default_dtype",
    "gradcheck",
    "set_default_dtype",
]
