"""Differentiable primitives.

Every function takes :class:`Tensor` (or array-like constants), computes the
forward value with numpy and, when a tape is active and an input requires
grad, records the matching backward rule.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

import numpy as np

from cellgt.exceptions import DimensionError
from cellgt.gradcore.tensor import BackwardRule, Tensor, active_tape, as_tensor

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "add",
    "clip",
    "concat",
    "div",
    "exp",
    "index",
    "layer_norm",
    "linear",
    "log",
    "matmul",
    "mean",
    "mul",
    "neg",
    "power",
    "relu",
    "repeat_rows",
    "reshape",
    "softmax_rows",
    "sub",
    "sum",
    "take_rows",
    "transpose",
)


def _result(values: NDArray[np.float64], inputs: tuple[Tensor, ...], rule: BackwardRule) -> Tensor:
    requires_grad = any(t.requires_grad for t in inputs)
    out = Tensor._wrap(values, requires_grad=requires_grad)
    if requires_grad:
        tape = active_tape()
        if tape is not None:
            tape.record(out, inputs, rule)
    return out


def _unbroadcast(grad: NDArray[np.float64], shape: tuple[int, ...]) -> NDArray[np.float64]:
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(op: str, a: Tensor, b: Tensor) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise DimensionError(op, a.shape, b.shape) from None


# --- elementwise ---


def add(a: Tensor | ArrayLike, b: Tensor | ArrayLike) -> Tensor:
    ta, tb = as_tensor(a), as_tensor(b)
    _broadcast_shape("add", ta, tb)
    return _result(
        ta.values + tb.values,
        (ta, tb),
        lambda g: (_unbroadcast(g, ta.shape), _unbroadcast(g, tb.shape)),
    )


def sub(a: Tensor | ArrayLike, b: Tensor | ArrayLike) -> Tensor:
    ta, tb = as_tensor(a), as_tensor(b)
    _broadcast_shape("sub", ta, tb)
    return _result(
        ta.values - tb.values,
        (ta, tb),
        lambda g: (_unbroadcast(g, ta.shape), _unbroadcast(-g, tb.shape)),
    )


def mul(a: Tensor | ArrayLike, b: Tensor | ArrayLike) -> Tensor:
    ta, tb = as_tensor(a), as_tensor(b)
    _broadcast_shape("mul", ta, tb)
    return _result(
        ta.values * tb.values,
        (ta, tb),
        lambda g: (_unbroadcast(g * tb.values, ta.shape), _unbroadcast(g * ta.values, tb.shape)),
    )


def div(a: Tensor | ArrayLike, b: Tensor | ArrayLike) -> Tensor:
    ta, tb = as_tensor(a), as_tensor(b)
    _broadcast_shape("div", ta, tb)
    return _result(
        ta.values / tb.values,
        (ta, tb),
        lambda g: (
            _unbroadcast(g / tb.values, ta.shape),
            _unbroadcast(-g * ta.values / (tb.values * tb.values), tb.shape),
        ),
    )


def neg(a: Tensor | ArrayLike) -> Tensor:
    ta = as_tensor(a)
    return _result(-ta.values, (ta,), lambda g: (-g,))


def relu(a: Tensor) -> Tensor:
    # relu'(0) = 0
    mask = a.values > 0
    return _result(np.where(mask, a.values, 0.0), (a,), lambda g: (g * mask,))


def exp(a: Tensor) -> Tensor:
    out = np.exp(a.values)
    return _result(out, (a,), lambda g: (g * out,))


def log(a: Tensor) -> Tensor:
    return _result(np.log(a.values), (a,), lambda g: (g / a.values,))


def power(a: Tensor, exponent: float) -> Tensor:
    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64]]:
        if not 0.0 <= exponent < 1.0:
            return (g * exponent * np.power(a.values, exponent - 1.0),)
        # the slope at 0 is unbounded for these exponents; use 0 there
        at_zero = a.values == 0.0
        slope = exponent * np.power(np.where(at_zero, 1.0, a.values), exponent - 1.0)
        return (g * np.where(at_zero, 0.0, slope),)

    return _result(np.power(a.values, exponent), (a,), rule)


def clip(a: Tensor, low: float, high: float) -> Tensor:
    inside = (a.values >= low) & (a.values <= high)
    return _result(np.clip(a.values, low, high), (a,), lambda g: (g * inside,))


# --- reductions ---


def sum(a: Tensor, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:  # noqa: A001
    out = a.values.sum(axis=axis, keepdims=keepdims)

    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64]]:
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.shape).copy(),)

    return _result(np.asarray(out), (a,), rule)


def mean(a: Tensor, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
    count = a.size if axis is None else int(np.prod([a.shape[i] for i in np.atleast_1d(axis)]))
    out = a.values.mean(axis=axis, keepdims=keepdims)

    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64]]:
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g / count, a.shape).copy(),)

    return _result(np.asarray(out), (a,), rule)


# --- linear algebra ---


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError("matmul", a.shape, b.shape)
    return _result(
        a.values @ b.values,
        (a, b),
        lambda g: (g @ b.values.T, a.values.T @ g),
    )


def transpose(a: Tensor) -> Tensor:
    if a.ndim != 2:
        raise DimensionError("transpose", a.shape)
    return _result(a.values.T, (a,), lambda g: (g.T,))


def linear(x: Tensor, weight: Tensor, bias: Tensor | None = None) -> Tensor:
    """``x @ weight + bias`` for ``x`` of shape (rows, in), ``weight`` (in, out)."""
    out = matmul(x, weight)
    return out if bias is None else add(out, bias)


# --- shape manipulation ---


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    return _result(a.values.reshape(tuple(shape)), (a,), lambda g: (g.reshape(a.shape),))


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    parts = tuple(tensors)
    if not parts:
        raise DimensionError("concat")
    ndim = parts[0].ndim
    axis_ = axis % ndim
    for t in parts[1:]:
        if t.ndim != ndim or any(t.shape[i] != parts[0].shape[i] for i in range(ndim) if i != axis_):
            raise DimensionError("concat", parts[0].shape, t.shape)
    bounds = np.cumsum([0, *[t.shape[axis_] for t in parts]])

    def rule(g: NDArray[np.float64]) -> list[NDArray[np.float64]]:
        return [np.take(g, np.arange(lo, hi), axis=axis_) for lo, hi in zip(bounds[:-1], bounds[1:], strict=True)]

    return _result(np.concatenate([t.values for t in parts], axis=axis_), parts, rule)


def index(a: Tensor, key: Any) -> Tensor:
    """``a[key]`` for slices or integer arrays; repeated indices accumulate."""

    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64]]:
        full = np.zeros(a.shape, dtype=np.float64)
        np.add.at(full, key, g)
        return (full,)

    return _result(np.array(a.values[key]), (a,), rule)


def take_rows(a: Tensor, rows: ArrayLike) -> Tensor:
    idx = np.asarray(rows, dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= a.shape[0]):
        raise DimensionError("take_rows", a.shape, idx.shape)
    return index(a, idx)


def repeat_rows(row: Tensor, count: int) -> Tensor:
    """Stack ``count`` copies of a (1, C) row into (count, C)."""
    if row.ndim != 2 or row.shape[0] != 1:
        raise DimensionError("repeat_rows", row.shape)
    return _result(
        np.repeat(row.values, count, axis=0),
        (row,),
        lambda g: (g.sum(axis=0, keepdims=True),),
    )


# --- normalisation ---


def softmax_rows(x: Tensor) -> Tensor:
    shifted = x.values - x.values.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    s = e / e.sum(axis=-1, keepdims=True)
    return _result(s, (x,), lambda g: (s * (g - (g * s).sum(axis=-1, keepdims=True)),))


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = 1e-5) -> Tensor:
    if gain.shape != (x.shape[-1],) or bias.shape != (x.shape[-1],):
        raise DimensionError("layer_norm", x.shape, gain.shape, bias.shape)
    width = x.shape[-1]
    mu = x.values.mean(axis=-1, keepdims=True)
    centered = x.values - mu
    inv = 1.0 / np.sqrt((centered * centered).mean(axis=-1, keepdims=True) + eps)
    xhat = centered * inv
    lead = tuple(range(x.ndim - 1))

    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64], ...]:
        dxhat = g * gain.values
        dx = (inv / width) * (
            width * dxhat - dxhat.sum(axis=-1, keepdims=True) - xhat * (dxhat * xhat).sum(axis=-1, keepdims=True)
        )
        return dx, (g * xhat).sum(axis=lead), g.sum(axis=lead)

    return _result(xhat * gain.values + bias.values, (x, gain, bias), rule)
