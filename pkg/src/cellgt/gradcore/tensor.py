from __future__ import annotations

from collections.abc import Callable, Sequence
from contextvars import ContextVar, Token
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from cellgt.exceptions import ContractError

if TYPE_CHECKING:
    import types

    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "BackwardRule",
    "Tape",
    "Tensor",
    "active_tape",
    "as_tensor",
    "backward",
)


BackwardRule = Callable[["NDArray[np.float64]"], Sequence["NDArray[np.float64] | None"]]

_ACTIVE_TAPE: ContextVar[Tape | None] = ContextVar("cellgt_active_tape", default=None)


class Tensor:
    """Dense float64 array with an optional gradient.

    Tensors produced by an operation while a :class:`Tape` is active (and
    with at least one input requiring grad) are recorded on that tape; all
    other tensors are leaves. ``backward`` accumulates into ``grad`` of the
    leaves only, so repeated backward passes sum until ``zero_grad``.
    """

    __slots__ = ("_tape", "grad", "name", "requires_grad", "values")

    def __init__(self, values: ArrayLike, *, requires_grad: bool = False, name: str = "") -> None:
        self.values: NDArray[np.float64] = np.array(values, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: NDArray[np.float64] | None = None
        self.name = name
        self._tape: Tape | None = None

    @classmethod
    def _wrap(cls, values: NDArray[np.float64], *, requires_grad: bool) -> Tensor:
        out = cls.__new__(cls)
        out.values = np.asarray(values, dtype=np.float64)
        out.values.flags.writeable = False
        out.requires_grad = requires_grad
        out.grad = None
        out.name = ""
        out._tape = None
        return out

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.values.shape)

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def is_leaf(self) -> bool:
        return self._tape is None

    def item(self) -> float:
        if self.size != 1:
            raise ContractError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self.values.reshape(()))

    def numpy(self) -> NDArray[np.float64]:
        return self.values.copy()

    def detach(self) -> Tensor:
        return Tensor(self.values)

    def zero_grad(self) -> None:
        self.grad = None

    def accumulate_grad(self, grad: NDArray[np.float64]) -> None:
        if grad.shape != self.values.shape:
            raise ContractError(f"gradient shape {grad.shape} does not match tensor shape {self.shape}")
        self.grad = grad.copy() if self.grad is None else self.grad + grad

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"

    def __len__(self) -> int:
        return self.shape[0]

    # Operators delegate to cellgt.gradcore.ops; imported lazily to avoid a cycle.

    def __add__(self, other: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.add(self, other)

    def __radd__(self, other: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.add(other, self)

    def __sub__(self, other: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.sub(self, other)

    def __rsub__(self, other: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.sub(other, self)

    def __mul__(self, other: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.mul(self, other)

    def __rmul__(self, other: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.mul(other, self)

    def __truediv__(self, other: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.div(self, other)

    def __neg__(self) -> Tensor:
        from cellgt.gradcore import ops

        return ops.neg(self)

    def __matmul__(self, other: Tensor) -> Tensor:
        from cellgt.gradcore import ops

        return ops.matmul(self, other)

    def __getitem__(self, key: Any) -> Tensor:
        from cellgt.gradcore import ops

        return ops.index(self, key)

    @property
    def T(self) -> Tensor:  # noqa: N802
        from cellgt.gradcore import ops

        return ops.transpose(self)


def as_tensor(value: Tensor | ArrayLike) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


@dataclass(frozen=True, slots=True)
class _Record:
    output: Tensor
    inputs: tuple[Tensor, ...]
    rule: BackwardRule


class Tape:
    """Ordered record of executed operations.

    Use as a context manager; operations run inside the ``with`` block on
    inputs that require grad are appended in execution order, so inputs
    always precede the operations consuming them.

    .. code-block:: python

        with Tape() as tape:
            loss = ops.sum(ops.mul(x, x))
        tape.backward(loss)
    """

    def __init__(self) -> None:
        self._records: list[_Record] = []
        self._tokens: list[Token[Tape | None]] = []

    def __enter__(self) -> Tape:
        self._tokens.append(_ACTIVE_TAPE.set(self))
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: types.TracebackType | None,
    ) -> None:
        _ACTIVE_TAPE.reset(self._tokens.pop())

    def __len__(self) -> int:
        return len(self._records)

    @property
    def operations(self) -> list[tuple[Tensor, tuple[Tensor, ...]]]:
        return [(r.output, r.inputs) for r in self._records]

    def record(self, output: Tensor, inputs: tuple[Tensor, ...], rule: BackwardRule) -> None:
        output._tape = self
        self._records.append(_Record(output, inputs, rule))

    def backward(self, loss: Tensor) -> None:
        if loss.size != 1:
            raise ContractError(f"backward needs a scalar loss, got shape {loss.shape}")
        if loss._tape is not self:
            raise ContractError("loss was not recorded on this tape; run the forward pass inside `with Tape()`")

        pending: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.values)}
        for record in reversed(self._records):
            grad_out = pending.pop(id(record.output), None)
            if grad_out is None:
                continue
            grads_in = record.rule(grad_out)
            for tensor, grad in zip(record.inputs, grads_in, strict=True):
                if grad is None or not tensor.requires_grad:
                    continue
                if tensor._tape is None:
                    tensor.accumulate_grad(np.asarray(grad, dtype=np.float64))
                elif id(tensor) in pending:
                    pending[id(tensor)] = pending[id(tensor)] + grad
                else:
                    pending[id(tensor)] = np.asarray(grad, dtype=np.float64)


def active_tape() -> Tape | None:
    return _ACTIVE_TAPE.get()


def backward(loss: Tensor) -> None:
    """Backpropagate a scalar loss into every leaf that requires grad."""
    if loss.size != 1:
        raise ContractError(f"backward needs a scalar loss, got shape {loss.shape}")
    if loss._tape is None:
        raise ContractError("loss is not reachable through a recorded tape")
    loss._tape.backward(loss)
