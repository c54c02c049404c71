from __future__ import annotations

from typing import Optional

import numpy as np

from dehazer.tensor import (
    ActivationKind,
    Parameter,
    Tensor,
    activate,
    conv2d,
    dense,
    he_uniform,
)

from ._module import Module, Sequential

__all__ = ["Conv2d", "Dense", "Activation", "ConvStage"]


class Conv2d(Module):
    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        kernel: int,
        rng: np.random.Generator,
        *,
        stride: int = 1,
        padding: Optional[int] = None,
    ) -> None:
        super().__init__()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel = kernel
        self.stride = stride
        self.padding = kernel // 2 if padding is None else padding
        fan_in = in_channels * kernel * kernel
        self.weight = Parameter(he_uniform((out_channels, in_channels, kernel, kernel), fan_in, rng))
        self.bias = Parameter(np.zeros(out_channels, dtype=np.float32))

    def forward(self, x: Tensor) -> Tensor:
        return conv2d(x, self.weight.value, self.bias.value, self.stride, self.padding)


class Dense(Module):
    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator) -> None:
        super().__init__()
        self.weight = Parameter(he_uniform((out_features, in_features), in_features, rng))
        self.bias = Parameter(np.zeros(out_features, dtype=np.float32))

    def forward(self, x: Tensor) -> Tensor:
        return dense(x, self.weight.value, self.bias.value)


class Activation(Module):
    def __init__(self, kind: ActivationKind) -> None:
        super().__init__()
        self.kind = kind

    def forward(self, x: Tensor) -> Tensor:
        return activate(x, self.kind)


class ConvStage(Sequential):
    """``count`` same-padded convolutions, each followed by the activation."""

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        count: int,
        kernel: int,
        activation: ActivationKind,
        rng: np.random.Generator,
    ) -> None:
        layers: list[Module] = []
        channels = in_channels
        for _ in range(count):
            layers.append(Conv2d(channels, out_channels, kernel, rng))
            layers.append(Activation(activation))
            channels = out_channels
        super().__init__(layers)
        self.out_channels = out_channels
