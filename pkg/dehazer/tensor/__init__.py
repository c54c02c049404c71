from ._tensor import Tensor, Parameter, as_tensor
from ._activation import ActivationName, ActivationKind, activate
from ._ops import (
    conv2d,
    maxpool2d,
    upsample_nearest2x,
    concat_channels,
    slice_channels,
    dense,
    global_avg_pool,
    global_max_pool,
    channel_mean,
    channel_max,
)
from ._optim import adam_step
from ._init import he_uniform
from ._gradcheck import finite_diff_gradcheck, double_precision

__all__ = [
    "Tensor",
    "Parameter",
    "as_tensor",
    "ActivationName",
    "ActivationKind",
    "activate",
    "conv2d",
    "maxpool2d",
    "upsample_nearest2x",
    "concat_channels",
    "slice_channels",
    "dense",
    "global_avg_pool",
    "global_max_pool",
    "channel_mean",
    "channel_max",
    "adam_step",
    "he_uniform",
    "finite_diff_gradcheck",
    "double_precision",
]
