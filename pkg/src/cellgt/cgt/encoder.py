from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ConfigurationError, ContractError
from cellgt.gradcore import (
    ParameterSet,
    Tensor,
    add,
    add_linear,
    concat,
    index,
    layer_norm,
    linear,
    matmul,
    mul,
    relu,
    softmax_rows,
    transpose,
)

if TYPE_CHECKING:
    from numpy.typing import NDArray

__all__ = (
    "ENCODER_PREFIX",
    "CGTEncoder",
)

ENCODER_PREFIX = "encoder."


class CGTEncoder:
    """Pre-norm transformer encoder over all node and edge tokens.

    ``x = W_in t``; each layer applies ``x += MHA(LN(x))`` then
    ``x += FFN(LN(x))``; a final layer norm closes the stack. Attention is
    dense over every token, with no mask and no positional term.
    """

    def __init__(
        self,
        params: ParameterSet,
        *,
        input_width: int,
        width: int,
        layers: int,
        heads: int,
        prefix: str = ENCODER_PREFIX,
    ) -> None:
        if width % heads:
            raise ConfigurationError(f"width {width} is not divisible by {heads} heads", field="heads")
        self.params = params
        self.input_width = input_width
        self.width = width
        self.layers = layers
        self.heads = heads
        self.prefix = prefix

    @classmethod
    def create(
        cls,
        params: ParameterSet,
        rng: np.random.Generator,
        *,
        input_width: int,
        width: int,
        layers: int,
        heads: int = 4,
        ffn_multiplier: int = 4,
        prefix: str = ENCODER_PREFIX,
    ) -> CGTEncoder:
        encoder = cls(params, input_width=input_width, width=width, layers=layers, heads=heads, prefix=prefix)
        add_linear(params, f"{prefix}input", input_width, width, rng)
        for layer in range(layers):
            p = f"{prefix}layers.{layer}."
            params.add(f"{p}ln1.gain", np.ones(width))
            params.add(f"{p}ln1.bias", np.zeros(width))
            for proj in ("query", "key", "value", "out"):
                add_linear(params, f"{p}attn.{proj}", width, width, rng)
            params.add(f"{p}ln2.gain", np.ones(width))
            params.add(f"{p}ln2.bias", np.zeros(width))
            add_linear(params, f"{p}ffn.hidden", width, ffn_multiplier * width, rng)
            add_linear(params, f"{p}ffn.out", ffn_multiplier * width, width, rng)
        params.add(f"{prefix}final_ln.gain", np.ones(width))
        params.add(f"{prefix}final_ln.bias", np.zeros(width))
        return encoder

    def _linear(self, name: str, x: Tensor) -> Tensor:
        return linear(x, self.params[f"{name}.weight"], self.params[f"{name}.bias"])

    def _norm(self, name: str, x: Tensor) -> Tensor:
        return layer_norm(x, self.params[f"{name}.gain"], self.params[f"{name}.bias"])

    def _attention(self, p: str, x: Tensor, maps: list[NDArray[np.float64]] | None) -> Tensor:
        q = self._linear(f"{p}attn.query", x)
        k = self._linear(f"{p}attn.key", x)
        v = self._linear(f"{p}attn.value", x)
        head_width = self.width // self.heads
        scale = 1.0 / math.sqrt(head_width)
        outputs = []
        for h in range(self.heads):
            cols = (slice(None), slice(h * head_width, (h + 1) * head_width))
            scores = mul(matmul(index(q, cols), transpose(index(k, cols))), scale)
            weights = softmax_rows(scores)
            if maps is not None:
                maps.append(weights.numpy())
            outputs.append(matmul(weights, index(v, cols)))
        return self._linear(f"{p}attn.out", concat(outputs, axis=-1))

    def _forward(self, tokens: Tensor, maps: list[NDArray[np.float64]] | None) -> Tensor:
        if tokens.ndim != 2 or tokens.shape[0] < 1:
            raise ContractError(f"encoder needs at least one token, got shape {tokens.shape}")
        if tokens.shape[1] != self.input_width:
            raise ConfigurationError(
                f"token width {tokens.shape[1]} does not match encoder input {self.input_width}", field="input_width"
            )
        x = self._linear(f"{self.prefix}input", tokens)
        for layer in range(self.layers):
            p = f"{self.prefix}layers.{layer}."
            x = add(x, self._attention(p, self._norm(f"{p}ln1", x), maps))
            hidden = relu(self._linear(f"{p}ffn.hidden", self._norm(f"{p}ln2", x)))
            x = add(x, self._linear(f"{p}ffn.out", hidden))
        return self._norm(f"{self.prefix}final_ln", x)

    def __call__(self, tokens: Tensor) -> Tensor:
        """(n + D, input_width) tokens -> (n + D, width) outputs."""
        return self._forward(tokens, None)

    def with_attention(self, tokens: Tensor) -> tuple[Tensor, list[NDArray[np.float64]]]:
        """Forward pass that also returns every head's attention matrix, layer by layer."""
        maps: list[NDArray[np.float64]] = []
        return self._forward(tokens, maps), maps
