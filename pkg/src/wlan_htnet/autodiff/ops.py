"""
Differentiable operations on 2-D tensors.

Each op computes its forward value with numpy and, when a tape is active
and any input requires a gradient, records a closure that maps the
upstream gradient to one gradient per input. Broadcasting is limited to
singleton rows/columns (row biases, per-edge attention weights).
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import NonFiniteError, ShapeError
from .tensor import BackwardFn, Tensor, as_matrix, current_tape, get_default_dtype

Operand = Union[Tensor, np.ndarray, float, int]


def constant(value: Operand) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _result(
    op: str, value: np.ndarray, parents: Tuple[Tensor, ...], backward: BackwardFn
) -> Tensor:
    requires = any(p.requires_grad for p in parents)
    out = Tensor.__new__(Tensor)
    out.value = value
    out.requires_grad = requires
    out.name = None
    tape = current_tape()
    if tape is not None:
        if tape.check_finite and not np.all(np.isfinite(value)):
            if all(np.all(np.isfinite(p.value)) for p in parents):
                raise NonFiniteError(f"{op} produced non-finite values from finite inputs")
        if requires:
            tape.record(op, out, parents, backward)
    return out


def _broadcast_shape(op: str, a: Tensor, b: Tensor) -> Tuple[int, int]:
    dims = []
    for da, db in zip(a.shape, b.shape):
        if da == db or db == 1:
            dims.append(da)
        elif da == 1:
            dims.append(db)
        else:
            raise ShapeError(op, a.shape, b.shape)
    return dims[0], dims[1]


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    for axis in (0, 1):
        if shape[axis] == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# --- arithmetic -------------------------------------------------------------


def add(a: Operand, b: Operand) -> Tensor:
    a, b = constant(a), constant(b)
    _broadcast_shape("add", a, b)

    def backward(g: np.ndarray) -> List[np.ndarray]:
        return [_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)]

    return _result("add", a.value + b.value, (a, b), backward)


def sub(a: Operand, b: Operand) -> Tensor:
    a, b = constant(a), constant(b)
    _broadcast_shape("sub", a, b)

    def backward(g: np.ndarray) -> List[np.ndarray]:
        return [_unbroadcast(g, a.shape), -_unbroadcast(g, b.shape)]

    return _result("sub", a.value - b.value, (a, b), backward)


def mul(a: Operand, b: Operand) -> Tensor:
    a, b = constant(a), constant(b)
    _broadcast_shape("mul", a, b)

    def backward(g: np.ndarray) -> List[np.ndarray]:
        return [_unbroadcast(g * b.value, a.shape), _unbroadcast(g * a.value, b.shape)]

    return _result("mul", a.value * b.value, (a, b), backward)


def neg(a: Tensor) -> Tensor:
    return _result("neg", -a.value, (a,), lambda g: [-g])


def scale(a: Tensor, factor: float) -> Tensor:
    return _result("scale", a.value * factor, (a,), lambda g: [g * factor])


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.shape[1] != b.shape[0]:
        raise ShapeError("matmul", a.shape, b.shape)

    def backward(g: np.ndarray) -> List[np.ndarray]:
        return [g @ b.value.T, a.value.T @ g]

    return _result("matmul", a.value @ b.value, (a, b), backward)


def transpose(a: Tensor) -> Tensor:
    return _result("transpose", a.value.T, (a,), lambda g: [g.T])


# --- structure --------------------------------------------------------------


def concat(tensors: Sequence[Tensor], axis: int = 1) -> Tensor:
    if not tensors:
        raise ValueError("concat needs at least one tensor")
    other = 1 - axis
    for t in tensors[1:]:
        if t.shape[other] != tensors[0].shape[other]:
            raise ShapeError("concat", tensors[0].shape, t.shape)
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def backward(g: np.ndarray) -> List[np.ndarray]:
        return list(np.split(g, bounds, axis=axis))

    value = np.concatenate([t.value for t in tensors], axis=axis)
    return _result("concat", value, tuple(tensors), backward)


def slice_cols(a: Tensor, start: int, stop: int) -> Tensor:
    if not 0 <= start <= stop <= a.shape[1]:
        raise ShapeError("slice_cols", a.shape, (start, stop))

    def backward(g: np.ndarray) -> List[np.ndarray]:
        full = np.zeros_like(a.value)
        full[:, start:stop] = g
        return [full]

    return _result("slice_cols", a.value[:, start:stop], (a,), backward)


def slice_rows(a: Tensor, start: int, stop: int) -> Tensor:
    if not 0 <= start <= stop <= a.shape[0]:
        raise ShapeError("slice_rows", a.shape, (start, stop))

    def backward(g: np.ndarray) -> List[np.ndarray]:
        full = np.zeros_like(a.value)
        full[start:stop] = g
        return [full]

    return _result("slice_rows", a.value[start:stop], (a,), backward)


def gather_rows(a: Tensor, index: np.ndarray) -> Tensor:
    """Select rows ``a[index]``; repeated indices accumulate their gradients"""
    index = np.asarray(index, dtype=np.int64)

    def backward(g: np.ndarray) -> List[np.ndarray]:
        full = np.zeros_like(a.value)
        np.add.at(full, index, g)
        return [full]

    return _result("gather_rows", a.value[index], (a,), backward)


# --- elementwise nonlinearities --------------------------------------------


def relu(a: Tensor) -> Tensor:
    tape = current_tape()
    if tape is not None:
        tape.note_kink(a.value)
    # subgradient 0 at exactly 0
    mask = a.value > 0
    return _result("relu", a.value * mask, (a,), lambda g: [g * mask])


def leaky_relu(a: Tensor, slope: float = 0.2) -> Tensor:
    tape = current_tape()
    if tape is not None:
        tape.note_kink(a.value)
    # subgradient `slope` at exactly 0
    factor = np.where(a.value > 0, 1.0, slope).astype(a.value.dtype)
    return _result("leaky_relu", a.value * factor, (a,), lambda g: [g * factor])


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (np.tanh(0.5 * x) + 1.0)


def sigmoid(a: Tensor) -> Tensor:
    y = _sigmoid(a.value)
    return _result("sigmoid", y, (a,), lambda g: [g * y * (1.0 - y)])


def tanh(a: Tensor) -> Tensor:
    y = np.tanh(a.value)
    return _result("tanh", y, (a,), lambda g: [g * (1.0 - y * y)])


def softplus(a: Tensor) -> Tensor:
    """log(1 + exp(x)) evaluated as max(x, 0) + log1p(exp(-|x|))"""
    x = a.value
    y = np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))
    return _result("softplus", y, (a,), lambda g: [g * _sigmoid(x)])


def exp(a: Tensor) -> Tensor:
    y = np.exp(a.value)
    return _result("exp", y, (a,), lambda g: [g * y])


def log(a: Tensor) -> Tensor:
    x = a.value
    return _result("log", np.log(x), (a,), lambda g: [g / x])


def sqrt(a: Tensor) -> Tensor:
    """Square root; the gradient at exactly zero is taken as zero"""
    y = np.sqrt(a.value)
    positive = y > 0.0
    safe = np.where(positive, y, 1.0)
    return _result("sqrt", y, (a,), lambda g: [np.where(positive, g * 0.5 / safe, 0.0)])


def dropout(a: Tensor, rate: float, rng: np.random.Generator) -> Tensor:
    if rate <= 0.0:
        return a
    keep = (rng.random(a.shape) >= rate).astype(a.value.dtype) / (1.0 - rate)
    return mul(a, keep)


# --- reductions ---------------------------------------------------------------


def sum_all(a: Tensor) -> Tensor:
    value = np.asarray(a.value.sum(), dtype=a.value.dtype).reshape(1, 1)
    return _result("sum", value, (a,), lambda g: [np.broadcast_to(g, a.shape).copy()])


def mean_all(a: Tensor) -> Tensor:
    n = max(a.size, 1)
    value = np.asarray(a.value.sum() / n, dtype=a.value.dtype).reshape(1, 1)
    return _result(
        "mean", value, (a,), lambda g: [np.broadcast_to(g / n, a.shape).copy()]
    )


def mse(pred: Tensor, target: Operand) -> Tensor:
    """Mean of squared differences over every element"""
    target = constant(target)
    if pred.shape != target.shape:
        raise ShapeError("mse", pred.shape, target.shape)
    diff = pred.value - target.value
    n = max(diff.size, 1)
    value = np.asarray((diff * diff).sum() / n, dtype=diff.dtype).reshape(1, 1)

    def backward(g: np.ndarray) -> List[np.ndarray]:
        grad = g * (2.0 / n) * diff
        return [grad, -grad]

    return _result("mse", value, (pred, target), backward)


# --- segment (per destination node) ops -------------------------------------


def segment_sum(a: Tensor, segments: np.ndarray, num_segments: int) -> Tensor:
    """Scatter-add rows of ``a`` into ``num_segments`` output rows"""
    segments = np.asarray(segments, dtype=np.int64)
    if segments.shape[0] != a.shape[0]:
        raise ShapeError("segment_sum", a.shape, segments.shape)
    out = np.zeros((num_segments, a.shape[1]), dtype=a.value.dtype)
    np.add.at(out, segments, a.value)
    return _result("segment_sum", out, (a,), lambda g: [g[segments]])


def segment_softmax(a: Tensor, segments: np.ndarray, num_segments: int) -> Tensor:
    """Softmax of each column taken separately within every segment"""
    segments = np.asarray(segments, dtype=np.int64)
    if segments.shape[0] != a.shape[0]:
        raise ShapeError("segment_softmax", a.shape, segments.shape)
    x = a.value
    peak = np.full((num_segments, x.shape[1]), -np.inf, dtype=x.dtype)
    np.maximum.at(peak, segments, x)
    e = np.exp(x - peak[segments])
    total = np.zeros((num_segments, x.shape[1]), dtype=x.dtype)
    np.add.at(total, segments, e)
    y = e / total[segments]

    def backward(g: np.ndarray) -> List[np.ndarray]:
        dot = np.zeros((num_segments, x.shape[1]), dtype=x.dtype)
        np.add.at(dot, segments, g * y)
        return [y * (g - dot[segments])]

    return _result("segment_softmax", y, (a,), backward)


# --- batch normalization ----------------------------------------------------


@dataclass
class BatchNormState:
    """Running statistics of one batch-norm layer"""

    running_mean: np.ndarray
    running_var: np.ndarray
    momentum: float = 0.1
    eps: float = 1e-5
    num_batches: int = field(default=0)

    @classmethod
    def fresh(cls, width: int, momentum: float = 0.1, eps: float = 1e-5) -> "BatchNormState":
        dtype = get_default_dtype()
        return cls(
            running_mean=np.zeros((1, width), dtype=dtype),
            running_var=np.ones((1, width), dtype=dtype),
            momentum=momentum,
            eps=eps,
        )


def batch_norm(
    a: Tensor,
    gamma: Tensor,
    beta: Tensor,
    state: BatchNormState,
    training: bool,
) -> Tensor:
    """Normalize every column over the rows of ``a`` and apply the affine map"""
    width = a.shape[1]
    if gamma.shape != (1, width) or beta.shape != (1, width):
        raise ShapeError("batch_norm", a.shape, gamma.shape)
    x = a.value
    n = x.shape[0]
    if training and n > 0:
        mean = x.mean(axis=0, keepdims=True)
        var = x.var(axis=0, keepdims=True)
        m = state.momentum
        state.running_mean = (1.0 - m) * state.running_mean + m * mean
        unbiased = var * n / (n - 1) if n > 1 else var
        state.running_var = (1.0 - m) * state.running_var + m * unbiased
        state.num_batches += 1
    else:
        mean, var = state.running_mean, state.running_var
    inv_std = 1.0 / np.sqrt(var + state.eps)
    x_hat = (x - mean) * inv_std
    y = gamma.value * x_hat + beta.value

    def backward(g: np.ndarray) -> List[Optional[np.ndarray]]:
        d_gamma = (g * x_hat).sum(axis=0, keepdims=True)
        d_beta = g.sum(axis=0, keepdims=True)
        d_xhat = g * gamma.value
        if training and n > 0:
            d_x = (inv_std / n) * (
                n * d_xhat
                - d_xhat.sum(axis=0, keepdims=True)
                - x_hat * (d_xhat * x_hat).sum(axis=0, keepdims=True)
            )
        else:
            d_x = d_xhat * inv_std
        return [d_x, d_gamma, d_beta]

    return _result("batch_norm", y, (a, gamma, beta), backward)


def zeros(rows: int, cols: int) -> Tensor:
    return Tensor(np.zeros((rows, cols), dtype=get_default_dtype()))


def ones(rows: int, cols: int) -> Tensor:
    return Tensor(np.ones((rows, cols), dtype=get_default_dtype()))


__all__ = [
    "Operand",
    "BatchNormState",
    "add",
    "as_matrix",
    "batch_norm",
    "concat",
    "constant",
    "dropout",
    "exp",
    "gather_rows",
    "leaky_relu",
    "log",
    "matmul",
    "mean_all",
    "mse",
    "mul",
    "neg",
    "ones",
    "relu",
    "scale",
    "segment_softmax",
    "segment_sum",
    "sigmoid",
    "slice_cols",
    "slice_rows",
    "softplus",
    "sqrt",
    "sub",
    "sum_all",
    "tanh",
    "transpose",
    "zeros",
]
