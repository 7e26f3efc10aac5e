"""Utility modules"""

from .config import (
    build_mlp_config,
    build_train_config,
    get_default_config,
    load_config,
    merge_configs,
    save_config,
    validate_config,
)
from .logging import configure_logging

__all__ = [
    "build_mlp_config",
    "build_train_config",
    "configure_logging",
    "get_default_config",
    "load_config",
    "merge_configs",
    "save_config",
    "validate_config",
]
