from . import ops
from .conv import conv2d, conv_output_size, max_pool2d, upsample_nearest2d
from .gradcheck import analytic_gradients, gradient_relative_error, numerical_gradient
from .ops import (
    add,
    clip,
    concat,
    div,
    exp,
    index,
    layer_norm,
    linear,
    log,
    matmul,
    mean,
    mul,
    neg,
    power,
    relu,
    repeat_rows,
    reshape,
    softmax_rows,
    sub,
    take_rows,
    transpose,
)
from .parameters import ParameterSet, add_conv, add_linear, normal_init, uniform_fan_in
from .tensor import Tape, Tensor, active_tape, as_tensor, backward

__all__ = [
    "ParameterSet",
    "Tape",
    "Tensor",
    "active_tape",
    "add",
    "add_conv",
    "add_linear",
    "analytic_gradients",
    "as_tensor",
    "backward",
    "clip",
    "concat",
    "conv2d",
    "conv_output_size",
    "div",
    "exp",
    "gradient_relative_error",
    "index",
    "layer_norm",
    "linear",
    "log",
    "matmul",
    "max_pool2d",
    "mean",
    "mul",
    "neg",
    "normal_init",
    "numerical_gradient",
    "ops",
    "power",
    "relu",
    "repeat_rows",
    "reshape",
    "softmax_rows",
    "sub",
    "take_rows",
    "transpose",
    "uniform_fan_in",
    "upsample_nearest2d",
]
