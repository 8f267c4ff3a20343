from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from cellgt.train.config import AdamConfig

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from cellgt.gradcore import ParameterSet

__all__ = ("Adam",)


class Adam:
    """Adam with bias-corrected moments and a constant learning rate.

    Parameters without a gradient are skipped for that step but still
    share the global step counter.
    """

    def __init__(self, params: ParameterSet, lr: float, config: AdamConfig | None = None) -> None:
        self.params = params
        self.lr = lr
        self.config = config or AdamConfig()
        self.steps = 0
        self._first: dict[str, NDArray[np.float64]] = {}
        self._second: dict[str, NDArray[np.float64]] = {}

    def step(self) -> None:
        self.steps += 1
        beta1, beta2, eps = self.config.beta1, self.config.beta2, self.config.eps
        correction1 = 1.0 - beta1**self.steps
        correction2 = 1.0 - beta2**self.steps
        for name, tensor in self.params.items():
            if tensor.grad is None:
                continue
            grad = tensor.grad
            m = beta1 * self._first.get(name, np.zeros_like(grad)) + (1.0 - beta1) * grad
            v = beta2 * self._second.get(name, np.zeros_like(grad)) + (1.0 - beta2) * grad * grad
            self._first[name], self._second[name] = m, v
            tensor.values = tensor.values - self.lr * (m / correction1) / (np.sqrt(v / correction2) + eps)

    def zero_grad(self) -> None:
        self.params.zero_grad()
