from __future__ import annotations

from typing import List, Optional, Tuple, Union

import numpy as np

from dehazer.exceptions import ConfigurationError, DimensionError
from dehazer.tensor import (
    ActivationName,
    Tensor,
    activate,
    concat_channels,
    global_avg_pool,
    maxpool2d,
    upsample_nearest2x,
)
from dehazer.utils.logging import logger

from ._blocks import CSPBlock, SPPBlock, attention_block
from ._config import Attention, Bottleneck, NetworkConfig
from ._layers import Activation, Conv2d, ConvStage, Dense
from ._module import Module, Sequential

SeedLike = Union[int, np.random.SeedSequence]

__all__ = [
    "Encoder",
    "GeneratorGraph",
    "DiscriminatorGraph",
    "build_generator",
    "build_discriminator",
    "discriminator_channels",
]


def _check_input(cfg: NetworkConfig, x: Tensor, channels: int) -> None:
    if x.ndim != 4:
        raise DimensionError("network input must be rank 4", axis="rank", expected=4, actual=x.ndim)
    if x.shape[1] != channels:
        raise DimensionError(
            "network input channel count differs from its configuration",
            axis="channels",
            expected=channels,
            actual=x.shape[1],
        )
    cfg.validate_extent(x.shape[2], x.shape[3])


class Encoder(Module):
    """``depth`` conv stages, each followed by a 2x2 max-pool."""

    def __init__(self, cfg: NetworkConfig, in_channels: int, rng: np.random.Generator) -> None:
        super().__init__()
        stages: List[Module] = []
        channels = in_channels
        for stage in range(cfg.depth):
            width = cfg.stage_width(stage)
            stages.append(
                ConvStage(channels, width, cfg.convs_per_stage, cfg.stage_kernel, cfg.activation, rng)
            )
            channels = width
        self.stages = Sequential(stages)
        self.out_channels = channels

    @property
    def stage_widths(self) -> Tuple[int, ...]:
        return tuple(stage.out_channels for stage in self.stages)  # type: ignore[attr-defined]

    def forward_with_skips(self, x: Tensor) -> Tuple[Tensor, List[Tensor]]:
        skips = []
        for stage in self.stages:
            x = stage(x)
            skips.append(x)
            x = maxpool2d(x, 2, 2)
        return x, skips

    def forward(self, x: Tensor) -> Tensor:
        return self.forward_with_skips(x)[0]


class _DecoderStage(Module):
    def __init__(self, cfg: NetworkConfig, in_channels: int, stage: int, rng: np.random.Generator):
        super().__init__()
        width = cfg.stage_width(stage)
        self.up_conv = Conv2d(in_channels, width, 3, rng)
        self.up_act = Activation(cfg.activation)
        self.merge = ConvStage(2 * width, width, cfg.convs_per_stage, cfg.stage_kernel, cfg.activation, rng)
        self.out_channels = width

    def forward(self, x: Tensor, skip: Tensor) -> Tensor:  # type: ignore[override]
        x = self.up_act(self.up_conv(upsample_nearest2x(x)))
        return self.merge(concat_channels(x, skip))


class GeneratorGraph(Module):
    def __init__(self, cfg: NetworkConfig, rng: np.random.Generator) -> None:
        super().__init__()
        self.config = cfg
        self.encoder = Encoder(cfg, cfg.input_channels, rng)

        width = cfg.stage_width(cfg.depth)
        self.bottleneck = ConvStage(
            self.encoder.out_channels, width, cfg.convs_per_stage, cfg.stage_kernel, cfg.activation, rng
        )
        self.context: Optional[Module] = None
        if cfg.bottleneck is Bottleneck.SPP:
            self.context = SPPBlock(width, cfg.spp_kernels, rng, fit_kernels=True)
        elif cfg.bottleneck is Bottleneck.CSP:
            self.context = CSPBlock(width, cfg.activation, rng)

        self.attention: Optional[Module] = None
        if cfg.attention is not Attention.NONE:
            self.attention = attention_block(cfg.attention, width, rng)

        decoder: List[Module] = []
        channels = width
        for stage in reversed(range(cfg.depth)):
            block = _DecoderStage(cfg, channels, stage, rng)
            decoder.append(block)
            channels = block.out_channels
        self.decoder = Sequential(decoder)
        self.head = Conv2d(channels, 3, 3, rng)

    @property
    def input_channels(self) -> int:
        return self.config.input_channels

    def forward(self, x: Tensor) -> Tensor:
        _check_input(self.config, x, self.input_channels)
        x, skips = self.encoder.forward_with_skips(x)
        x = self.bottleneck(x)
        if self.context is not None:
            x = self.context(x)
        if self.attention is not None:
            x = self.attention(x)
        for block, skip in zip(self.decoder, reversed(skips)):
            x = block(x, skip)
        return activate(self.head(x), ActivationName.SIGMOID)


def discriminator_channels(cfg: NetworkConfig) -> int:
    """Candidate RGB plus either the transmission channel or the full generator input."""
    if cfg.conditional_discriminator:
        return 3 + cfg.input_channels
    return 3 + (cfg.input_channels - 3)


class DiscriminatorGraph(Module):
    """Generator encoder followed by global average pooling and one raw score per item."""

    def __init__(self, cfg: NetworkConfig, rng: np.random.Generator) -> None:
        super().__init__()
        self.config = cfg
        self.input_channels = discriminator_channels(cfg)
        self.encoder = Encoder(cfg, self.input_channels, rng)
        self.score = Dense(self.encoder.out_channels, 1, rng)

    def forward(self, x: Tensor) -> Tensor:
        _check_input(self.config, x, self.input_channels)
        return self.score(global_avg_pool(self.encoder(x)))


def build_generator(cfg: NetworkConfig, seed: SeedLike = 0) -> GeneratorGraph:
    graph = GeneratorGraph(cfg, np.random.default_rng(seed))
    logger.debug(
        "built generator %s with %d parameters",
        cfg.preset_name or "(custom)",
        graph.num_parameters(),
    )
    return graph


def build_discriminator(cfg: NetworkConfig, seed: SeedLike = 0) -> DiscriminatorGraph:
    if not cfg.is_generative:
        raise ConfigurationError("a discriminator requires the generative core")
    graph = DiscriminatorGraph(cfg, np.random.default_rng(seed))
    logger.debug("built discriminator with %d parameters", graph.num_parameters())
    return graph
