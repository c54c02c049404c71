from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from dehazer.exceptions import ConfigurationError
from dehazer.tensor import (
    ActivationKind,
    ActivationName,
    Tensor,
    activate,
    channel_max,
    channel_mean,
    concat_channels,
    global_avg_pool,
    global_max_pool,
    maxpool2d,
    slice_channels,
)
from dehazer.utils.logging import logger

from ._config import Attention
from ._layers import Conv2d, ConvStage, Dense
from ._module import Module

__all__ = [
    "spp_pyramid",
    "fit_pool_kernels",
    "SPPBlock",
    "CSPBlock",
    "SpatialAttention",
    "ChannelAttention",
    "attention_block",
]


def spp_pyramid(x: Tensor, kernels: Sequence[int]) -> Tensor:
    """``x`` followed by one stride-1 same-padded max-pool per kernel, along channels."""
    extent = min(x.shape[2], x.shape[3])
    out = x
    for kernel in kernels:
        if kernel % 2 == 0:
            raise ConfigurationError(f"SPP kernel {kernel} must be odd")
        if kernel > 1 and kernel >= extent:
            raise ConfigurationError(f"SPP kernel {kernel} must be smaller than the {extent}px feature map")
        out = concat_channels(out, maxpool2d(x, kernel, 1, (kernel - 1) // 2))
    return out


def fit_pool_kernels(kernels: Sequence[int], extent: int) -> Tuple[int, ...]:
    """Shrink each kernel to the largest odd size strictly below ``extent`` (at least 1)."""
    largest = extent - 1 if (extent - 1) % 2 else extent - 2
    largest = max(largest, 1)
    return tuple(min(kernel, largest) for kernel in kernels)


class SPPBlock(Module):
    """Pooling pyramid fused back to the input width by a 1x1 conv.

    With ``fit_kernels`` the kernels shrink to the feature map instead of raising.
    """

    def __init__(
        self,
        channels: int,
        kernels: Sequence[int],
        rng: np.random.Generator,
        *,
        fit_kernels: bool = False,
    ) -> None:
        super().__init__()
        self.kernels = tuple(kernels)
        self.fit_kernels = fit_kernels
        self.fuse = Conv2d(channels * (len(self.kernels) + 1), channels, 1, rng)

    def pyramid(self, x: Tensor) -> Tensor:
        if not self.fit_kernels:
            return spp_pyramid(x, self.kernels)
        extent = min(x.shape[2], x.shape[3])
        kernels = fit_pool_kernels(self.kernels, extent)
        if kernels != self.kernels:
            logger.debug("SPP kernels %s fitted to %s for %dpx map", self.kernels, kernels, extent)
        return spp_pyramid(x, kernels)

    def forward(self, x: Tensor) -> Tensor:
        return self.fuse(self.pyramid(x))


class CSPBlock(Module):
    """Half the channels pass two convolutions, the other half bypasses; a 1x1 conv fuses both."""

    def __init__(self, channels: int, activation: ActivationKind, rng: np.random.Generator) -> None:
        super().__init__()
        if channels % 2:
            raise ConfigurationError(f"CSP block needs an even channel count, got {channels}")
        self.channels = channels
        half = channels // 2
        self.processed = ConvStage(half, half, 2, 3, activation, rng)
        self.fuse = Conv2d(channels, channels, 1, rng)

    def forward(self, x: Tensor) -> Tensor:
        if x.shape[1] != self.channels:
            raise ConfigurationError(f"CSP block built for {self.channels} channels, got {x.shape[1]}")
        half = self.channels // 2
        processed = self.processed(slice_channels(x, 0, half))
        bypass = slice_channels(x, half, self.channels)
        return self.fuse(concat_channels(processed, bypass))


class SpatialAttention(Module):
    def __init__(self, rng: np.random.Generator, kernel: int = 7) -> None:
        super().__init__()
        self.conv = Conv2d(2, 1, kernel, rng)

    def gate(self, x: Tensor) -> Tensor:
        descriptor = concat_channels(channel_mean(x), channel_max(x))
        return activate(self.conv(descriptor), ActivationName.SIGMOID)

    def forward(self, x: Tensor) -> Tensor:
        return x * self.gate(x)


class ChannelAttention(Module):
    def __init__(self, channels: int, rng: np.random.Generator, reduction: int = 4) -> None:
        super().__init__()
        hidden = max(1, channels // reduction)
        self.squeeze = Dense(channels, hidden, rng)
        self.excite = Dense(hidden, channels, rng)

    def _shared(self, pooled: Tensor) -> Tensor:
        return self.excite(activate(self.squeeze(pooled), ActivationName.RELU))

    def gate(self, x: Tensor) -> Tensor:
        logits = self._shared(global_avg_pool(x)) + self._shared(global_max_pool(x))
        return activate(logits, ActivationName.SIGMOID)

    def forward(self, x: Tensor) -> Tensor:
        return x * self.gate(x)


def attention_block(kind: Attention, channels: int, rng: np.random.Generator) -> Module:
    if kind is Attention.SAM:
        return SpatialAttention(rng)
    if kind is Attention.CAM:
        return ChannelAttention(channels, rng)
    raise ConfigurationError(f"no attention block for {kind.value!r}")
