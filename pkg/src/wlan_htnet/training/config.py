"""
Training configuration
"""

from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..nn.config import ModelConfig


class TrainConfig(BaseModel):
    """Optimizer and loop settings plus the nested model configuration"""

    model_config = ConfigDict(extra="forbid", protected_namespaces=())

    learning_rate: float = Field(1e-3, gt=0.0)
    epochs: int = Field(150, ge=0)
    batch_size: int = Field(32, ge=1)
    seed: int = Field(0, ge=0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    adam_eps: float = Field(1e-8, gt=0.0)
    weight_decay: float = Field(0.0, ge=0.0)
    split_ratios: Tuple[float, float, float] = (3.0, 1.0, 1.0)
    threads: Optional[int] = Field(None, ge=1)
    dtype: str = "float64"
    check_finite: bool = False
    model: ModelConfig = Field(default_factory=ModelConfig)

    @field_validator("dtype")
    @classmethod
    def _known_dtype(cls, value: str) -> str:
        if value not in ("float32", "float64"):
            raise ValueError(f"dtype must be float32 or float64, got {value!r}")
        return value
