"""
Finite-difference verification of tape gradients.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Tuple

import numpy as np

from ..exceptions import NonFiniteError, WlanHtnetError
from .tensor import Tape, Tensor

logger = logging.getLogger(__name__)


@dataclass
class ParameterCheck:
    """Comparison of analytic and numeric gradients for one tensor"""

    name: str
    max_rel_error: float
    max_abs_error: float
    checked: int
    excluded: int


@dataclass
class GradcheckReport:
    tolerance: float
    parameters: List[ParameterCheck] = field(default_factory=list)
    non_finite: bool = False
    message: str = ""

    @property
    def max_rel_error(self) -> float:
        return max((p.max_rel_error for p in self.parameters), default=0.0)

    @property
    def excluded(self) -> int:
        return sum(p.excluded for p in self.parameters)

    @property
    def passed(self) -> bool:
        return not self.non_finite and self.max_rel_error < self.tolerance

    def worst(self) -> Optional[ParameterCheck]:
        return max(self.parameters, key=lambda p: p.max_rel_error, default=None)


def _evaluate(fn: Callable[[], Tensor]) -> Tuple[float, Tuple[bytes, ...]]:
    with Tape(track_kinks=True) as tape:
        out = fn()
    if out.size != 1:
        raise WlanHtnetError(f"gradcheck needs a scalar output, got {out.shape}")
    return out.item(), tape.kink_signature


def gradcheck(
    fn: Callable[[], Tensor],
    params: Mapping[str, Tensor],
    eps: float = 1e-5,
    tolerance: float = 1e-4,
    abs_floor: float = 1e-4,
    max_entries: Optional[int] = None,
    seed: int = 0,
) -> GradcheckReport:
    """Compare tape gradients of ``fn`` against central differences.

    ``fn`` must rebuild the scalar output from the current parameter values
    on every call. Entries whose perturbation moves a ReLU/LeakyReLU input
    across zero are non-differentiable points and are excluded. Relative
    error is ``|a - n| / max(|a|, |n|, abs_floor)``.
    """
    report = GradcheckReport(tolerance=tolerance)
    rng = np.random.default_rng(seed)
    try:
        with Tape(track_kinks=True) as tape:
            out = fn()
        if not np.all(np.isfinite(out.value)):
            report.non_finite = True
            report.message = "forward output is not finite"
            return report
        grads = tape.backward(out)
    except NonFiniteError as exc:
        report.non_finite = True
        report.message = str(exc)
        return report
    base_kinks = tape.kink_signature

    for name, param in params.items():
        param.value = np.ascontiguousarray(param.value)
        analytic = grads.get(param)
        flat = param.value.reshape(-1)
        indices = np.arange(flat.size)
        if max_entries is not None and flat.size > max_entries:
            indices = np.sort(rng.choice(flat.size, size=max_entries, replace=False))
        max_rel = max_abs = 0.0
        checked = excluded = 0
        for idx in indices:
            original = flat[idx]
            flat[idx] = original + eps
            plus, kinks_plus = _evaluate(fn)
            flat[idx] = original - eps
            minus, kinks_minus = _evaluate(fn)
            flat[idx] = original
            if kinks_plus != base_kinks or kinks_minus != base_kinks:
                excluded += 1
                continue
            if not (np.isfinite(plus) and np.isfinite(minus)):
                report.non_finite = True
                report.message = f"non-finite output while perturbing {name}[{idx}]"
                return report
            numeric = (plus - minus) / (2.0 * eps)
            exact = float(analytic.reshape(-1)[idx])
            diff = abs(exact - numeric)
            max_abs = max(max_abs, diff)
            max_rel = max(max_rel, diff / max(abs(exact), abs(numeric), abs_floor))
            checked += 1
        report.parameters.append(ParameterCheck(name, max_rel, max_abs, checked, excluded))
        logger.debug(
            f"gradcheck {name}: max rel {max_rel:.3e}, checked {checked}, excluded {excluded}"
        )
    return report
