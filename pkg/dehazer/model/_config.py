from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import pydantic

from dehazer import GlobalConfiguration
from dehazer.constants import DEFAULT_SPP_KERNELS
from dehazer.exceptions import ConfigurationError
from dehazer.tensor import ActivationKind, ActivationName
from dehazer.types import BaseModel, ImmutableDict, enum

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
]


class Core(enum.StrEnum):
    SEGMENTATION = "segmentation"
    GENERATIVE = "generative"


class Bottleneck(enum.StrEnum):
    PLAIN = "plain"
    SPP = "spp"
    CSP = "csp"


class Attention(enum.StrEnum):
    NONE = "none"
    SAM = "sam"
    CAM = "cam"


class NetworkConfig(BaseModel):
    core: Core = Core.GENERATIVE
    input_channels: int = 4
    bottleneck: Bottleneck = Bottleneck.SPP
    attention: Attention = Attention.NONE
    activation: ActivationKind = ActivationKind(name=ActivationName.SWISH)
    extra_convs_per_stage: int = 1
    stage_kernel: int = 3
    base_width: int = pydantic.Field(default_factory=lambda: GlobalConfiguration.defaults().base_width)
    depth: int = pydantic.Field(default_factory=lambda: GlobalConfiguration.defaults().depth)
    spp_kernels: Tuple[int, ...] = DEFAULT_SPP_KERNELS
    conditional_discriminator: bool = False

    @pydantic.validator("activation", pre=True)
    def _parse_activation(cls, value: Any) -> ActivationKind:
        return ActivationKind.parse(value)

    @pydantic.validator("input_channels", pre=True)
    def _three_or_four_channels(cls, value: Any) -> int:
        value = int(value)
        if value not in (3, 4):
            raise ValueError("input_channels must be 3 (RGB) or 4 (RGB + transmission)")
        return value

    @pydantic.validator("extra_convs_per_stage")
    def _non_negative_extra(cls, value: int) -> int:
        if value < 0:
            raise ValueError("extra_convs_per_stage must be >= 0")
        return value

    @pydantic.validator("stage_kernel")
    def _odd_kernel(cls, value: int) -> int:
        if value < 1 or value % 2 == 0:
            raise ValueError("stage_kernel must be an odd integer >= 1")
        return value

    @pydantic.validator("base_width")
    def _positive_width(cls, value: int) -> int:
        if value < 1:
            raise ValueError("base_width must be >= 1")
        return value

    @pydantic.validator("depth")
    def _min_depth(cls, value: int) -> int:
        if value < 2:
            raise ValueError("depth must be >= 2")
        return value

    @pydantic.validator("spp_kernels", pre=True)
    def _parse_kernels(cls, value: Any) -> Tuple[int, ...]:
        if isinstance(value, str):
            value = [part for part in value.replace(" ", "").split(",") if part]
        kernels = tuple(int(kernel) for kernel in value)
        if not kernels or any(kernel < 1 or kernel % 2 == 0 for kernel in kernels):
            raise ValueError("spp_kernels must be a non-empty list of odd integers")
        return kernels

    @property
    def is_generative(self) -> bool:
        return self.core is Core.GENERATIVE

    @property
    def convs_per_stage(self) -> int:
        return 2 + self.extra_convs_per_stage

    @property
    def required_divisor(self) -> int:
        return 2**self.depth

    def stage_width(self, stage: int) -> int:
        return self.base_width * 2**stage

    def validate_extent(self, height: int, width: int) -> None:
        divisor = self.required_divisor
        if height % divisor or width % divisor:
            raise ConfigurationError(
                f"input extent {height}x{width} must be divisible by 2^depth = {divisor} "
                f"(depth={self.depth})"
            )

    @property
    def preset_name(self) -> Optional[str]:
        return preset_name(self)


_RELU = ActivationKind(name=ActivationName.RELU)


def _architecture(**fields: Any) -> ImmutableDict[str, Any]:
    base: Dict[str, Any] = {
        "core": Core.GENERATIVE,
        "input_channels": 4,
        "bottleneck": Bottleneck.PLAIN,
        "attention": Attention.NONE,
        "activation": _RELU,
        "extra_convs_per_stage": 0,
        "stage_kernel": 3,
    }
    base.update(fields)
    return ImmutableDict(base)


PRESETS: ImmutableDict[str, ImmutableDict[str, Any]] = ImmutableDict(
    {
        "S-U-Net": _architecture(core=Core.SEGMENTATION, input_channels=3),
        "G-U-Net": _architecture(input_channels=3),
        "G-U-Net 4-C": _architecture(),
        "CSP G-U-Net 4-C": _architecture(bottleneck=Bottleneck.CSP),
        "SPP G-U-Net 4-C (ReLU)": _architecture(bottleneck=Bottleneck.SPP),
        "SPP G-U-Net 4-C SAM": _architecture(bottleneck=Bottleneck.SPP, attention=Attention.SAM),
        "SPP G-U-Net 4-C CAM": _architecture(bottleneck=Bottleneck.SPP, attention=Attention.CAM),
        "SPP G-U-Net 4-C (LeakyReLU)": _architecture(
            bottleneck=Bottleneck.SPP, activation=ActivationKind(name=ActivationName.LEAKY_RELU)
        ),
        "SPP G-U-Net 4-C (Swish)": _architecture(
            bottleneck=Bottleneck.SPP, activation=ActivationKind(name=ActivationName.SWISH)
        ),
        "SPP G-U-Net 4-C (Mish)": _architecture(
            bottleneck=Bottleneck.SPP, activation=ActivationKind(name=ActivationName.MISH)
        ),
        "EDN-GTM": _architecture(
            bottleneck=Bottleneck.SPP,
            activation=ActivationKind(name=ActivationName.SWISH),
            extra_convs_per_stage=1,
        ),
        "EDN-GTM (5x5)": _architecture(
            bottleneck=Bottleneck.SPP,
            activation=ActivationKind(name=ActivationName.SWISH),
            extra_convs_per_stage=1,
            stage_kernel=5,
        ),
    }
)

TABLE_PRESETS: Tuple[str, ...] = (
    "S-U-Net",
    "G-U-Net",
    "G-U-Net 4-C",
    "SPP G-U-Net 4-C (ReLU)",
    "SPP G-U-Net 4-C (Swish)",
    "EDN-GTM",
)


def preset_config(name: str, **knobs: Any) -> NetworkConfig:
    """Build the named preset; ``knobs`` override width, depth and other non-architecture fields."""
    try:
        architecture = PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"unknown preset: {name!r}") from None
    return NetworkConfig.checked(**{**dict(architecture), **knobs})


def preset_name(cfg: NetworkConfig) -> Optional[str]:
    for name, architecture in PRESETS.items():
        if all(getattr(cfg, field) == value for field, value in architecture.items()):
            return name
    return None


def parse_network_config(text: str) -> NetworkConfig:
    """Parse the ``key = value`` configuration document."""
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key in values:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value

    preset = values.pop("preset", None)
    unknown = sorted(set(values) - set(NetworkConfig.__fields__))
    if unknown:
        raise ConfigurationError(f"unknown configuration keys: {', '.join(unknown)}")
    if preset is not None:
        return preset_config(preset, **values)
    return NetworkConfig.checked(**values)


def load_network_config(source: Union[str, Path]) -> NetworkConfig:
    """Resolve a preset name or read a configuration file."""
    if isinstance(source, str) and source in PRESETS:
        return preset_config(source)
    path = Path(source)
    if not path.is_file():
        raise ConfigurationError(f"{source!r} is neither a preset name nor a configuration file")
    return parse_network_config(path.read_text(encoding="utf-8"))
