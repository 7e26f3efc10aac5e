"""
Model configuration
"""

from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator

FEATURE_GROUPS = ("position", "channel", "airtime", "sinr", "rssi", "interference")


class AttentionMode(str, Enum):
    SOFTMAX = "softmax"  # normalized over each destination's incoming edges
    RAW = "raw"


class LstmActivation(str, Enum):
    SIGMOID = "sigmoid"
    TANH = "tanh"


class ModelConfig(BaseModel):
    """Shape and behaviour of an HTNet model.

    ``hidden`` is the per-relation node width, so every HTL layer emits
    ``3 * hidden`` columns.
    """

    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    layers: int = Field(2, ge=0, le=32)
    hidden: int = Field(128, ge=1)
    edge_hidden: int = Field(128, ge=1)
    jk_width: int = Field(128, ge=1)
    lstm_hidden: int = Field(128, ge=1)
    lstm_layers: int = Field(2, ge=1)
    attention: AttentionMode = AttentionMode.SOFTMAX
    lstm_activation: LstmActivation = LstmActivation.SIGMOID
    temporal: bool = True
    batch_norm: bool = True
    bn_momentum: float = Field(0.1, gt=0.0, le=1.0)
    dropout: float = Field(0.0, ge=0.0, lt=1.0)
    leaky_slope: float = Field(0.2, ge=0.0)
    standardize_positions: bool = True
    standardize_signals: bool = False
    feature_masks: List[str] = Field(default_factory=list)

    @field_validator("feature_masks")
    @classmethod
    def _known_groups(cls, value: List[str]) -> List[str]:
        unknown = sorted(set(value) - set(FEATURE_GROUPS))
        if unknown:
            raise ValueError(f"unknown feature groups {unknown}; expected {FEATURE_GROUPS}")
        return sorted(set(value))

    @property
    def htl_width(self) -> int:
        return 3 * self.hidden

    @property
    def embedding_width(self) -> int:
        return self.lstm_hidden if self.temporal else self.jk_width
