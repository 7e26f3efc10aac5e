"""
Configuration documents: YAML/JSON files, defaults, validation and typed views
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from pydantic import ValidationError

from ..exceptions import ConfigError
from ..nn.config import ModelConfig
from ..predictors.mlp import MlpConfig
from ..training.config import TrainConfig

SECTIONS = ("model", "training", "mlp", "logging")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
_YAML_SUFFIXES = (".yaml", ".yml")


def _file_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix in _YAML_SUFFIXES:
        return "yaml"
    if suffix == ".json":
        return "json"
    raise ValueError(f"Unsupported config file format: {path.suffix}")


def load_config(config_path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a configuration document

    Args:
        config_path: ``.yaml``, ``.yml`` or ``.json`` file

    Returns:
        The parsed mapping; an empty YAML file gives ``{}``

    Raises:
        FileNotFoundError: If the file is missing
        ValueError: If the suffix is unsupported or the YAML is malformed
    """
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    fmt = _file_format(path)
    text = path.read_text(encoding="utf-8")
    if fmt == "json":
        return json.loads(text)
    try:
        return yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise ValueError(f"Invalid YAML in {path}: {e}") from e


def save_config(config: Dict[str, Any], config_path: Union[str, Path]) -> None:
    """Write ``config`` in the format named by the suffix, creating parent directories"""
    path = Path(config_path)
    fmt = _file_format(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "yaml":
        text = yaml.safe_dump(config, default_flow_style=False, indent=2, sort_keys=False)
    else:
        text = json.dumps(config, indent=2) + "\n"
    path.write_text(text, encoding="utf-8")


def get_default_config() -> Dict[str, Any]:
    """Default configuration: the published training protocol"""
    training = TrainConfig().model_dump(mode="json")
    model = training.pop("model")
    training["split_ratios"] = list(training["split_ratios"])
    return {
        "model": model,
        "training": training,
        "mlp": MlpConfig().model_dump(mode="json"),
        "logging": {
            "level": "INFO",
            "format": "%(message)s",
        },
    }


def validate_config(config: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """
    Validate configuration structure and field values

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors: List[str] = []

    for section in config:
        if section not in SECTIONS:
            errors.append(f"Unknown section: {section}")
    for section in SECTIONS:
        if section in config and not isinstance(config[section], dict):
            errors.append(f"Section '{section}' must be a mapping")
    if errors:
        return False, errors

    checks = (("model", ModelConfig), ("training", TrainConfig), ("mlp", MlpConfig))
    for section, schema in checks:
        try:
            schema.model_validate(config.get(section, {}))
        except ValidationError as e:
            for err in e.errors():
                loc = ".".join(str(p) for p in err["loc"])
                errors.append(f"{section}.{loc}: {err['msg']}")

    level = config.get("logging", {}).get("level", "INFO")
    if str(level).upper() not in LOG_LEVELS:
        errors.append(f"logging.level must be one of {', '.join(LOG_LEVELS)}")

    return len(errors) == 0, errors


def merge_configs(base_config: Dict[str, Any], override_config: Dict[str, Any]) -> Dict[str, Any]:
    """Deep merge; nested mappings merge key by key and ``override_config`` wins"""
    merged = dict(base_config)
    for key, value in override_config.items():
        current = merged.get(key)
        if isinstance(current, dict) and isinstance(value, dict):
            merged[key] = merge_configs(current, value)
        else:
            merged[key] = value
    return merged


def build_train_config(
    config: Optional[Dict[str, Any]] = None, overrides: Optional[Dict[str, Any]] = None
) -> TrainConfig:
    """Typed training config from a config document; ``overrides`` go into
    the ``training`` section and win over it."""
    config = config or {}
    data = dict(config.get("training", {}))
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    data["model"] = config.get("model", {})
    try:
        return TrainConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid training configuration: {e}") from e


def build_mlp_config(config: Optional[Dict[str, Any]] = None) -> MlpConfig:
    try:
        return MlpConfig.model_validate((config or {}).get("mlp", {}))
    except ValidationError as e:
        raise ConfigError(f"invalid mlp configuration: {e}") from e
