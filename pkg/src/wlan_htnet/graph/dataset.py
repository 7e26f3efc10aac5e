"""
JSON-lines dataset files, splits and summary statistics
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from ..exceptions import ConfigError, DatasetParseError
from .model import DeploymentSequence

logger = logging.getLogger(__name__)

DATASET_FORMAT_VERSION = 1
DEFAULT_SPLIT = (3, 1, 1)


def deployment_to_json(deployment: DeploymentSequence) -> str:
    """Serialize one deployment as a single JSON line (no trailing newline)"""
    payload = deployment.model_dump(mode="json", by_alias=True)
    for snap in payload["snapshots"]:
        snap["labels"] = {
            str(k): v for k, v in sorted(snap["labels"].items(), key=lambda kv: int(kv[0]))
        }
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


def write_dataset(
    path: Union[str, Path], deployments: Iterable[DeploymentSequence]
) -> int:
    """Write deployments one per line; returns the number written"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for dep in deployments:
            f.write(deployment_to_json(dep))
            f.write("\n")
            count += 1
    logger.info(f"Wrote {count} deployments to {path}")
    return count


def _field_of(error: ValidationError) -> Tuple[str, str]:
    first = error.errors()[0]
    loc = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
    return loc, first.get("msg", str(error))


def parse_deployment(text: str, line: int = 1) -> DeploymentSequence:
    try:
        payload: Any = json.loads(text)
    except json.JSONDecodeError as e:
        raise DatasetParseError(line, "<json>", e.msg) from e
    if not isinstance(payload, dict):
        raise DatasetParseError(line, "<root>", "expected a JSON object")
    try:
        return DeploymentSequence.model_validate(payload)
    except ValidationError as e:
        loc, msg = _field_of(e)
        raise DatasetParseError(line, loc, msg) from e


def iter_dataset(path: Union[str, Path]) -> Iterator[DeploymentSequence]:
    """Lazily parse a dataset file; blank lines are skipped"""
    with open(path, encoding="utf-8") as f:
        for number, text in enumerate(f, start=1):
            if text.strip():
                yield parse_deployment(text, number)


def read_dataset(path: Union[str, Path]) -> List[DeploymentSequence]:
    """Parse a whole dataset file.

    Any malformed line raises :class:`DatasetParseError` naming the line and
    field; nothing is returned in that case.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")
    deployments = list(iter_dataset(path))
    logger.debug(f"Read {len(deployments)} deployments from {path}")
    return deployments


@dataclass
class DatasetSplits:
    train: List[DeploymentSequence]
    val: List[DeploymentSequence]
    test: List[DeploymentSequence]

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return len(self.train), len(self.val), len(self.test)

    def ids(self) -> Dict[str, List[int]]:
        return {
            "train": [d.id for d in self.train],
            "val": [d.id for d in self.val],
            "test": [d.id for d in self.test],
        }


def split_sizes(total: int, ratios: Sequence[float] = DEFAULT_SPLIT) -> Tuple[int, int, int]:
    if len(ratios) != 3 or any(r < 0 for r in ratios) or sum(ratios) <= 0:
        raise ConfigError(f"split ratios must be three non-negative numbers, got {ratios}")
    weight = float(sum(ratios))
    n_train = int(round(total * ratios[0] / weight))
    n_val = int(round(total * ratios[1] / weight))
    n_val = min(n_val, total - n_train)
    return n_train, n_val, total - n_train - n_val


def split_dataset(
    deployments: Sequence[DeploymentSequence],
    ratios: Sequence[float] = DEFAULT_SPLIT,
    seed: int = 0,
) -> DatasetSplits:
    """Shuffle deployments with ``seed`` and cut disjoint train/val/test sets"""
    n_train, n_val, _ = split_sizes(len(deployments), ratios)
    order = np.random.default_rng(seed).permutation(len(deployments))
    shuffled = [deployments[i] for i in order]
    return DatasetSplits(
        train=shuffled[:n_train],
        val=shuffled[n_train : n_train + n_val],
        test=shuffled[n_train + n_val :],
    )


def select_split(
    deployments: Sequence[DeploymentSequence], ids: Sequence[int]
) -> List[DeploymentSequence]:
    """Pick deployments by id, in the order given"""
    by_id = {d.id: d for d in deployments}
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise ConfigError(f"deployments not in dataset: {missing[:5]}")
    return [by_id[i] for i in ids]


@dataclass
class DatasetStats:
    """Summary of a dataset in the shape of a setup table row"""

    deployments: int
    sequence_length: int
    targets: int
    mean_throughput: float
    std_throughput: float
    split_sizes: Tuple[int, int, int]
    setups: List[int] = field(default_factory=list)
    per_snapshot_mean: List[float] = field(default_factory=list)
    per_snapshot_std: List[float] = field(default_factory=list)
    stopped_fraction: Optional[float] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "deployments": self.deployments,
            "sequence_length": self.sequence_length,
            "targets": self.targets,
            "mean_throughput": self.mean_throughput,
            "std_throughput": self.std_throughput,
            "split_sizes": list(self.split_sizes),
            "setups": self.setups,
            "per_snapshot_mean": self.per_snapshot_mean,
            "per_snapshot_std": self.per_snapshot_std,
            "stopped_fraction": self.stopped_fraction,
        }


def dataset_stats(
    deployments: Sequence[DeploymentSequence],
    ratios: Sequence[float] = DEFAULT_SPLIT,
    stopped_fraction: Optional[float] = None,
) -> DatasetStats:
    """Throughput statistics over target STAs, overall and per snapshot index"""
    by_step: Dict[int, List[float]] = {}
    values: List[float] = []
    for dep in deployments:
        for snap in dep.snapshots:
            for sta in snap.target_sta_ids():
                y = snap.labels[sta]
                values.append(y)
                by_step.setdefault(snap.time_index, []).append(y)

    lengths = sorted({len(d) for d in deployments})
    if len(lengths) > 1:
        logger.warning(f"Mixed sequence lengths in dataset: {lengths}")
    arr = np.asarray(values, dtype=np.float64)
    steps = sorted(by_step)
    return DatasetStats(
        deployments=len(deployments),
        sequence_length=lengths[-1] if lengths else 0,
        targets=int(arr.size),
        mean_throughput=float(arr.mean()) if arr.size else 0.0,
        std_throughput=float(arr.std()) if arr.size else 0.0,
        split_sizes=split_sizes(len(deployments), ratios),
        setups=sorted({d.setup for d in deployments}),
        per_snapshot_mean=[float(np.mean(by_step[t])) for t in steps],
        per_snapshot_std=[float(np.std(by_step[t])) for t in steps],
        stopped_fraction=stopped_fraction,
    )
