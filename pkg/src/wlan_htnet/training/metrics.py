"""
Error metrics over (STA, time) pairs
"""

from typing import Tuple

import numpy as np
import numpy.typing as npt

from ..exceptions import EmptyTargetError


def _pair(y: npt.ArrayLike, y_hat: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(y, dtype=np.float64).reshape(-1)
    b = np.asarray(y_hat, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"label/prediction count mismatch: {a.size} vs {b.size}")
    if a.size == 0:
        raise EmptyTargetError("metric over an empty set of targets")
    return a, b


def rmse(y: npt.ArrayLike, y_hat: npt.ArrayLike) -> float:
    a, b = _pair(y, y_hat)
    return float(np.sqrt(np.mean((a - b) ** 2)))


def mae(y: npt.ArrayLike, y_hat: npt.ArrayLike) -> float:
    a, b = _pair(y, y_hat)
    return float(np.mean(np.abs(a - b)))
