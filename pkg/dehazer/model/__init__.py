from ._config import (
    Core,
    Bottleneck,
    Attention,
    NetworkConfig,
    PRESETS,
    TABLE_PRESETS,
    preset_config,
    preset_name,
    parse_network_config,
    load_network_config,
)
from ._module import Module, Sequential
from ._layers import Conv2d, Dense, Activation, ConvStage
from ._blocks import (
    spp_pyramid,
    fit_pool_kernels,
    SPPBlock,
    CSPBlock,
    SpatialAttention,
    ChannelAttention,
    attention_block,
)
from ._graphs import (
    Encoder,
    GeneratorGraph,
    DiscriminatorGraph,
    build_generator,
    build_discriminator,
    discriminator_channels,
)

__all__ = [
    "Core",
    "Bottleneck",
    "Attention",
    "NetworkConfig",
    "PRESETS",
    "TABLE_PRESETS",
    "preset_config",
    "preset_name",
    "parse_network_config",
    "load_network_config",
    "Module",
    "Sequential",
    "Conv2d",
    "Dense",
    "Activation",
    "ConvStage",
    "spp_pyramid",
    "fit_pool_kernels",
    "SPPBlock",
    "CSPBlock",
    "SpatialAttention",
    "ChannelAttention",
    "attention_block",
    "Encoder",
    "GeneratorGraph",
    "DiscriminatorGraph",
    "build_generator",
    "build_discriminator",
    "discriminator_channels",
]
