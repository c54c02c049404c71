"""Finite-difference checks for every layer, block and full graph."""
from __future__ import annotations

import dataclasses
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from dehazer.exceptions import ConfigurationError, GradcheckFailure
from dehazer.model import (
    PRESETS,
    CSPBlock,
    ChannelAttention,
    SPPBlock,
    SpatialAttention,
    build_discriminator,
    build_generator,
    discriminator_channels,
    preset_config,
)
from dehazer.tensor import (
    ActivationKind,
    ActivationName,
    Parameter,
    Tensor,
    activate,
    channel_max,
    channel_mean,
    concat_channels,
    conv2d,
    dense,
    finite_diff_gradcheck,
    global_avg_pool,
    global_max_pool,
    maxpool2d,
    slice_channels,
    upsample_nearest2x,
)
from dehazer.types import BaseModel
from dehazer.utils.logging import logger

__all__ = [
    "GROUPS",
    "GradcheckCase",
    "GradcheckResult",
    "GradcheckSummary",
    "suite_cases",
    "check_case",
    "run_gradcheck_suite",
]


GROUPS = ("layers", "blocks", "networks")

LINEAR_TOLERANCE = 1e-6
TOLERANCE = 1e-3
# piecewise-linear graphs are probed with a small step to stay clear of their kinks
KINK_STEP = 1e-6
# whole networks sum hundreds of outputs, so roundoff needs a wider absolute floor
NETWORK_ATOL = 1e-4

Checkable = Union[Tensor, Parameter]
Forward = Callable[[], Tensor]
Builder = Callable[[np.random.Generator], Tuple[Forward, List[Checkable]]]


@dataclasses.dataclass(frozen=True, kw_only=True)
class GradcheckCase:
    name: str
    group: str
    build: Builder
    tolerance: float = TOLERANCE
    step: float = 1e-3
    samples: int = 20
    atol: float = 1e-6


class GradcheckResult(BaseModel):
    name: str
    group: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error < self.tolerance


class GradcheckSummary(BaseModel):
    results: List[GradcheckResult]

    @property
    def passed(self) -> int:
        return sum(result.passed for result in self.results)

    @property
    def failures(self) -> List[GradcheckResult]:
        return [result for result in self.results if not result.passed]

    def raise_for_failures(self) -> None:
        if self.failures:
            names = ", ".join(f"{r.name} ({r.max_error:.2e})" for r in self.failures)
            raise GradcheckFailure(f"{len(self.failures)} of {len(self.results)} gradient checks failed: {names}")


def _input(rng: np.random.Generator, shape: Tuple[int, ...], scale: float = 1.0) -> Tensor:
    return Tensor(rng.standard_normal(shape) * scale, requires_grad=True)


def _param(rng: np.random.Generator, shape: Tuple[int, ...]) -> Parameter:
    return Parameter(rng.standard_normal(shape) * 0.5)


def _unary(op: Callable[[Tensor], Tensor], shape: Tuple[int, ...] = (1, 2, 6, 6)) -> Builder:
    def build(rng: np.random.Generator) -> Tuple[Forward, List[Checkable]]:
        x = _input(rng, shape)
        return (lambda: op(x)), [x]

    return build


def _conv(stride: int, padding: int) -> Builder:
    def build(rng: np.random.Generator) -> Tuple[Forward, List[Checkable]]:
        x = _input(rng, (1, 2, 6, 6))
        weight, bias = _param(rng, (3, 2, 3, 3)), _param(rng, (3,))
        return (lambda: conv2d(x, weight.value, bias.value, stride, padding)), [x, weight, bias]

    return build


def _conv_swish_mean(rng: np.random.Generator) -> Tuple[Forward, List[Checkable]]:
    x = _input(rng, (1, 2, 6, 6))
    weight, bias = _param(rng, (3, 2, 3, 3)), _param(rng, (3,))
    return (lambda: activate(conv2d(x, weight.value, bias.value, 1, 1), ActivationName.SWISH).mean()), [
        x,
        weight,
        bias,
    ]


def _concat(rng: np.random.Generator) -> Tuple[Forward, List[Checkable]]:
    a, b = _input(rng, (1, 2, 6, 6)), _input(rng, (1, 1, 6, 6))
    return (lambda: concat_channels(a, b)), [a, b]


def _dense(rng: np.random.Generator) -> Tuple[Forward, List[Checkable]]:
    x = _input(rng, (1, 2, 6, 6))
    weight, bias = _param(rng, (3, 2)), _param(rng, (3,))
    return (lambda: dense(global_avg_pool(x), weight.value, bias.value)), [x, weight, bias]


def _module_case(make: Callable[[np.random.Generator], object], shape: Tuple[int, ...]) -> Builder:
    def build(rng: np.random.Generator) -> Tuple[Forward, List[Checkable]]:
        module = make(rng)
        x = _input(rng, shape)
        return (lambda: module(x)), [x, *module.parameters()]  # type: ignore[operator, attr-defined]

    return build


def _network_case(preset: str, role: str) -> Builder:
    def build(rng: np.random.Generator) -> Tuple[Forward, List[Checkable]]:
        cfg = preset_config(preset, base_width=4, depth=2)
        if role == "generator":
            graph = build_generator(cfg, seed=int(rng.integers(2**31)))
            channels = cfg.input_channels
        else:
            graph = build_discriminator(cfg, seed=int(rng.integers(2**31)))
            channels = discriminator_channels(cfg)
        x = Tensor(rng.uniform(0.0, 1.0, size=(1, channels, 16, 16)), requires_grad=True)
        return (lambda: graph(x)), [x, *graph.parameters()]

    return build


def _layer_cases() -> List[GradcheckCase]:
    cases = [
        GradcheckCase(name="conv2d", group="layers", build=_conv(1, 1), tolerance=LINEAR_TOLERANCE),
        GradcheckCase(name="conv2d stride 2", group="layers", build=_conv(2, 0), tolerance=LINEAR_TOLERANCE),
        GradcheckCase(name="conv2d swish mean", group="layers", build=_conv_swish_mean),
        GradcheckCase(
            name="maxpool2d k2", group="layers", build=_unary(lambda x: maxpool2d(x, 2, 2)), step=KINK_STEP
        ),
        GradcheckCase(
            name="maxpool2d k5 same",
            group="layers",
            build=_unary(lambda x: maxpool2d(x, 5, 1, 2)),
            step=KINK_STEP,
        ),
        GradcheckCase(
            name="upsample_nearest2x",
            group="layers",
            build=_unary(upsample_nearest2x),
            tolerance=LINEAR_TOLERANCE,
        ),
        GradcheckCase(name="concat_channels", group="layers", build=_concat, tolerance=LINEAR_TOLERANCE),
        GradcheckCase(
            name="slice_channels",
            group="layers",
            build=_unary(lambda x: slice_channels(x, 1, 2)),
            tolerance=LINEAR_TOLERANCE,
        ),
        GradcheckCase(name="dense", group="layers", build=_dense, tolerance=LINEAR_TOLERANCE),
        GradcheckCase(
            name="global_avg_pool", group="layers", build=_unary(global_avg_pool), tolerance=LINEAR_TOLERANCE
        ),
        GradcheckCase(name="global_max_pool", group="layers", build=_unary(global_max_pool), step=KINK_STEP),
        GradcheckCase(
            name="channel_mean", group="layers", build=_unary(channel_mean), tolerance=LINEAR_TOLERANCE
        ),
        GradcheckCase(name="channel_max", group="layers", build=_unary(channel_max), step=KINK_STEP),
    ]
    for name in ActivationName:
        kind = ActivationKind(name=name)
        kinked = name in (ActivationName.RELU, ActivationName.LEAKY_RELU)
        cases.append(
            GradcheckCase(
                name=f"activate {name.value}",
                group="layers",
                build=_unary(lambda x, kind=kind: activate(x, kind)),
                step=KINK_STEP if kinked else 1e-3,
                tolerance=LINEAR_TOLERANCE if name is ActivationName.IDENTITY else TOLERANCE,
            )
        )
    return cases


def _block_cases() -> List[GradcheckCase]:
    swish = ActivationKind(name=ActivationName.SWISH)
    return [
        GradcheckCase(
            name="spp block",
            group="blocks",
            build=_module_case(lambda rng: SPPBlock(4, (3, 5), rng), (1, 4, 8, 8)),
            step=KINK_STEP,
        ),
        GradcheckCase(
            name="csp block",
            group="blocks",
            build=_module_case(lambda rng: CSPBlock(4, swish, rng), (1, 4, 8, 8)),
        ),
        GradcheckCase(
            name="spatial attention",
            group="blocks",
            build=_module_case(lambda rng: SpatialAttention(rng), (1, 4, 8, 8)),
            step=KINK_STEP,
        ),
        GradcheckCase(
            name="channel attention",
            group="blocks",
            build=_module_case(lambda rng: ChannelAttention(4, rng), (1, 4, 8, 8)),
            step=KINK_STEP,
        ),
    ]


def _network_cases() -> List[GradcheckCase]:
    cases = []
    for preset in PRESETS:
        cases.append(
            GradcheckCase(
                name=f"generator {preset}",
                group="networks",
                build=_network_case(preset, "generator"),
                step=KINK_STEP,
                atol=NETWORK_ATOL,
            )
        )
        if preset_config(preset).is_generative:
            cases.append(
                GradcheckCase(
                    name=f"discriminator {preset}",
                    group="networks",
                    build=_network_case(preset, "discriminator"),
                    step=KINK_STEP,
                    atol=NETWORK_ATOL,
                )
            )
    return cases


def suite_cases(groups: Optional[Iterable[str]] = None) -> List[GradcheckCase]:
    selected = tuple(GROUPS if groups is None else groups)
    unknown = sorted(set(selected) - set(GROUPS))
    if unknown:
        raise ConfigurationError(f"unknown gradcheck group(s): {', '.join(unknown)}")
    factories = {"layers": _layer_cases, "blocks": _block_cases, "networks": _network_cases}
    return [case for group in GROUPS if group in selected for case in factories[group]()]


def check_case(case: GradcheckCase, seed: int = 0) -> GradcheckResult:
    """Weight the case output with a fixed random tensor and compare both gradients of its sum."""
    rng = np.random.default_rng(seed)
    forward, params = case.build(rng)
    weights = Tensor(rng.standard_normal(forward().shape))
    error = finite_diff_gradcheck(
        lambda: (forward() * weights).sum(),
        params,
        step=case.step,
        samples=case.samples,
        seed=seed,
        atol=case.atol,
    )
    result = GradcheckResult(name=case.name, group=case.group, max_error=error, tolerance=case.tolerance)
    logger.debug("gradcheck %s: %.3e (%s)", case.name, error, "ok" if result.passed else "FAILED")
    return result


def run_gradcheck_suite(groups: Optional[Sequence[str]] = None, seed: int = 0) -> GradcheckSummary:
    summary = GradcheckSummary(results=[check_case(case, seed) for case in suite_cases(groups)])
    logger.info("gradcheck: %d of %d checks passed", summary.passed, len(summary.results))
    return summary
