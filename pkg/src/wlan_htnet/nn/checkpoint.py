"""
Versioned checkpoint files: a numpy ``.npz`` archive of named tensors with a
JSON header stored under ``__header__``.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from ..exceptions import CheckpointError

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "wlan-htnet-checkpoint"
CHECKPOINT_VERSION = 1
_HEADER_KEY = "__header__"


@dataclass
class Checkpoint:
    header: Dict[str, Any]
    tensors: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def predictor(self) -> str:
        return str(self.header.get("predictor", ""))


def save_checkpoint(
    path: Union[str, Path], header: Dict[str, Any], tensors: Dict[str, np.ndarray]
) -> Path:
    path = Path(path)
    if _HEADER_KEY in tensors:
        raise CheckpointError(f"tensor name {_HEADER_KEY!r} is reserved")
    full_header = {"format": CHECKPOINT_FORMAT, "version": CHECKPOINT_VERSION, **header}
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = {name: np.asarray(value) for name, value in tensors.items()}
    arrays[_HEADER_KEY] = np.array(json.dumps(full_header, sort_keys=True))
    with open(path, "wb") as f:
        np.savez(f, **arrays)
    logger.info(f"Checkpoint written to {path}")
    return path


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """Read a checkpoint, rejecting foreign files and other format versions"""
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"Checkpoint not found: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            if _HEADER_KEY not in archive.files:
                raise CheckpointError(f"{path}: missing checkpoint header")
            header = json.loads(str(archive[_HEADER_KEY]))
            tensors = {k: archive[k] for k in archive.files if k != _HEADER_KEY}
    except CheckpointError:
        raise
    except (OSError, ValueError) as e:
        raise CheckpointError(f"{path}: not a readable checkpoint ({e})") from e

    if header.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path}: unknown format {header.get('format')!r}")
    if header.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: checkpoint version {header.get('version')} is not supported "
            f"(expected {CHECKPOINT_VERSION})"
        )
    return Checkpoint(header=header, tensors=tensors)
