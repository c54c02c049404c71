from __future__ import annotations

import re
from typing import Any, Callable, Dict

import numpy as np
import pydantic
from scipy.special import expit

from dehazer.exceptions import ConfigurationError
from dehazer.types import BaseModel, enum

from ._tensor import Tensor

__all__ = ["ActivationName", "ActivationKind", "activate"]


class ActivationName(enum.StrEnum):
    RELU = "relu"
    LEAKY_RELU = "leaky_relu"
    SWISH = "swish"
    MISH = "mish"
    SIGMOID = "sigmoid"
    IDENTITY = "identity"


_PATTERN = re.compile(r"^\s*(?P<name>[a-z_]+)\s*(\(\s*(?P<slope>[0-9.eE+-]+)\s*\))?\s*$")


class ActivationKind(BaseModel):
    name: ActivationName
    slope: float = 0.1

    @pydantic.validator("slope")
    def _slope_in_open_unit_interval(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("leaky_relu slope must be in (0, 1)")
        return value

    @classmethod
    def parse(cls, value: Any) -> ActivationKind:
        """Accepts ``relu``, ``leaky_relu(0.2)``, an ``ActivationName`` or a mapping."""
        if isinstance(value, cls):
            return value
        if isinstance(value, ActivationName):
            return cls(name=value)
        if isinstance(value, dict):
            return cls.checked(**value)
        if not isinstance(value, str):
            raise ConfigurationError(f"invalid activation: {value!r}")

        matched = _PATTERN.match(value.lower())
        if not matched:
            raise ConfigurationError(f"invalid activation: {value!r}")
        try:
            name = ActivationName.find_member(matched.group("name"))
        except KeyError:
            raise ConfigurationError(f"unknown activation: {matched.group('name')!r}") from None

        slope = matched.group("slope")
        if slope is not None and name is not ActivationName.LEAKY_RELU:
            raise ConfigurationError(f"activation {name.value!r} takes no parameter")
        try:
            return cls(name=name) if slope is None else cls(name=name, slope=float(slope))
        except (pydantic.ValidationError, ValueError) as e:
            raise ConfigurationError(str(e)) from e

    def __str__(self) -> str:
        if self.name is ActivationName.LEAKY_RELU:
            return f"{self.name.value}({self.slope:g})"
        return self.name.value


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def _mish(x: np.ndarray) -> np.ndarray:
    return x * np.tanh(_softplus(x))


def _mish_grad(x: np.ndarray) -> np.ndarray:
    tanh_sp = np.tanh(_softplus(x))
    return tanh_sp + x * (1.0 - tanh_sp * tanh_sp) * expit(x)


def _swish_grad(x: np.ndarray) -> np.ndarray:
    sig = expit(x)
    return sig + x * sig * (1.0 - sig)


def _sigmoid_grad(x: np.ndarray) -> np.ndarray:
    sig = expit(x)
    return sig * (1.0 - sig)


ForwardFn = Callable[[np.ndarray, float], np.ndarray]
GradFn = Callable[[np.ndarray, float], np.ndarray]

_FORWARD: Dict[ActivationName, ForwardFn] = {
    ActivationName.RELU: lambda x, _: np.maximum(x, 0.0),
    ActivationName.LEAKY_RELU: lambda x, slope: np.where(x > 0, x, slope * x),
    ActivationName.SWISH: lambda x, _: x * expit(x),
    ActivationName.MISH: lambda x, _: _mish(x),
    ActivationName.SIGMOID: lambda x, _: expit(x),
    ActivationName.IDENTITY: lambda x, _: x,
}

# derivatives with respect to the pre-activation input
_DERIVATIVES: Dict[ActivationName, GradFn] = {
    ActivationName.RELU: lambda x, _: (x > 0).astype(x.dtype),
    ActivationName.LEAKY_RELU: lambda x, slope: np.where(x > 0, 1.0, slope).astype(x.dtype),
    ActivationName.SWISH: lambda x, _: _swish_grad(x),
    ActivationName.MISH: lambda x, _: _mish_grad(x),
    ActivationName.SIGMOID: lambda x, _: _sigmoid_grad(x),
    ActivationName.IDENTITY: lambda x, _: np.ones_like(x),
}


def activate(input: Tensor, kind: ActivationKind | ActivationName | str) -> Tensor:
    kind = ActivationKind.parse(kind)
    x = input.data
    out = _FORWARD[kind.name](x, kind.slope).astype(x.dtype, copy=False)
    return Tensor.from_op(
        out,
        (input,),
        lambda g: (g * _DERIVATIVES[kind.name](x, kind.slope),),
    )
