"""
Dense 2-D tensors and the tape that records operations on them.

Every tensor is a matrix; vectors are stored as single columns and row
biases as ``(1, d)`` matrices. Operations only record themselves while a
:class:`Tape` is active in the current thread, so inference runs without
any bookkeeping.
"""

import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from ..exceptions import AutodiffUsageError, NonFiniteError

_DEFAULT_DTYPE = np.float64
_local = threading.local()

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


def set_default_dtype(dtype: npt.DTypeLike) -> None:
    """Switch new tensors between float64 (default) and float32"""
    global _DEFAULT_DTYPE
    resolved = np.dtype(dtype)
    if resolved not in (np.dtype(np.float32), np.dtype(np.float64)):
        raise ValueError(f"Unsupported tensor dtype: {resolved}")
    _DEFAULT_DTYPE = resolved.type


def get_default_dtype() -> type:
    return _DEFAULT_DTYPE


def as_matrix(value: npt.ArrayLike, dtype: Optional[type] = None) -> np.ndarray:
    arr = np.asarray(value, dtype=dtype or _DEFAULT_DTYPE)
    if arr.ndim == 0:
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        return arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"Tensors are 2-D, got {arr.ndim} dimensions")
    return arr


class Tensor:
    """A matrix value with an optional gradient requirement"""

    __slots__ = ("value", "requires_grad", "name", "__weakref__")

    def __init__(
        self,
        value: npt.ArrayLike,
        requires_grad: bool = False,
        name: Optional[str] = None,
    ) -> None:
        self.value = as_matrix(value)
        self.requires_grad = requires_grad
        self.name = name

    @classmethod
    def parameter(cls, value: npt.ArrayLike, name: str) -> "Tensor":
        return cls(value, requires_grad=True, name=name)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.value.shape  # type: ignore[return-value]

    @property
    def size(self) -> int:
        return int(self.value.size)

    def item(self) -> float:
        if self.value.size != 1:
            raise ValueError(f"item() needs a single element, shape is {self.shape}")
        return float(self.value.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.value

    def detach(self) -> "Tensor":
        return Tensor(self.value)

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"

    # Operators delegate to autodiff.ops
    def __add__(self, other: "TensorLike") -> "Tensor":
        from . import ops

        return ops.add(self, other)

    def __radd__(self, other: "TensorLike") -> "Tensor":
        from . import ops

        return ops.add(other, self)

    def __sub__(self, other: "TensorLike") -> "Tensor":
        from . import ops

        return ops.sub(self, other)

    def __rsub__(self, other: "TensorLike") -> "Tensor":
        from . import ops

        return ops.sub(other, self)

    def __mul__(self, other: "TensorLike") -> "Tensor":
        from . import ops

        return ops.mul(self, other)

    def __rmul__(self, other: "TensorLike") -> "Tensor":
        from . import ops

        return ops.mul(other, self)

    def __neg__(self) -> "Tensor":
        from . import ops

        return ops.neg(self)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        from . import ops

        return ops.matmul(self, other)

    @property
    def T(self) -> "Tensor":
        from . import ops

        return ops.transpose(self)


TensorLike = Union[Tensor, np.ndarray, float]


@dataclass
class _Record:
    op: str
    output: Tensor
    parents: Tuple[Tensor, ...]
    backward: BackwardFn


class Gradients:
    """Gradient buffer returned by :meth:`Tape.backward`, keyed by tensor"""

    def __init__(self, grads: Dict[int, np.ndarray], tensors: Dict[int, Tensor]):
        self._grads = grads
        self._tensors = tensors

    def __getitem__(self, tensor: Tensor) -> np.ndarray:
        return self.get(tensor)

    def __contains__(self, tensor: Tensor) -> bool:
        return id(tensor) in self._grads

    def get(self, tensor: Tensor) -> np.ndarray:
        """Gradient for ``tensor``; zeros when the loss does not depend on it"""
        grad = self._grads.get(id(tensor))
        if grad is None:
            return np.zeros_like(tensor.value)
        return grad

    def items(self) -> Iterator[Tuple[Tensor, np.ndarray]]:
        for key, grad in self._grads.items():
            yield self._tensors[key], grad

    def __len__(self) -> int:
        return len(self._grads)


class Tape:
    """Records differentiable operations in execution (= topological) order.

    Use as a context manager; exactly one tape is active per thread::

        with Tape() as tape:
            loss = model(batch)
        grads = tape.backward(loss)
    """

    def __init__(self, check_finite: bool = False, track_kinks: bool = False) -> None:
        self.check_finite = check_finite
        self.track_kinks = track_kinks
        self._records: List[_Record] = []
        self._index: Dict[int, int] = {}
        self._kinks: List[bytes] = []
        self._previous: Optional["Tape"] = None

    def __enter__(self) -> "Tape":
        self._previous = getattr(_local, "tape", None)
        _local.tape = self
        return self

    def __exit__(self, *exc: object) -> None:
        _local.tape = self._previous
        self._previous = None

    def __len__(self) -> int:
        return len(self._records)

    def record(
        self, op: str, output: Tensor, parents: Tuple[Tensor, ...], backward: BackwardFn
    ) -> None:
        self._index[id(output)] = len(self._records)
        self._records.append(_Record(op, output, parents, backward))

    def note_kink(self, pre_activation: np.ndarray) -> None:
        """Remember the sign pattern of a piecewise-linear activation input"""
        if self.track_kinks:
            self._kinks.append(np.packbits(pre_activation > 0).tobytes())

    @property
    def kink_signature(self) -> Tuple[bytes, ...]:
        return tuple(self._kinks)

    def ops(self) -> List[str]:
        return [rec.op for rec in self._records]

    def backward(self, loss: Tensor) -> Gradients:
        """Propagate d(loss)/d(.) to every tensor the loss depends on.

        A fresh buffer is used on every call, so calling backward twice
        on the same tape returns identical gradients.
        """
        if not self._records:
            raise AutodiffUsageError("backward called before any forward op was recorded")
        start = self._index.get(id(loss))
        if start is None:
            raise AutodiffUsageError("loss tensor was not produced on this tape")
        if loss.size != 1:
            raise AutodiffUsageError(f"loss must be a scalar, got shape {loss.shape}")
        if not np.all(np.isfinite(loss.value)):
            raise NonFiniteError("loss is not finite")

        grads: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.value)}
        tensors: Dict[int, Tensor] = {id(loss): loss}
        for rec in reversed(self._records[: start + 1]):
            upstream = grads.get(id(rec.output))
            if upstream is None:
                continue
            for parent, grad in zip(rec.parents, rec.backward(upstream)):
                if grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + grad
                else:
                    grads[key] = grad
                    tensors[key] = parent
        return Gradients(grads, tensors)


def current_tape() -> Optional[Tape]:
    return getattr(_local, "tape", None)
