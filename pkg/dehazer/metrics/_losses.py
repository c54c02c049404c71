from __future__ import annotations

from typing import Optional, Tuple, TypeVar, Union

import pydantic

from dehazer.exceptions import DimensionError, NumericalError
from dehazer.tensor import Tensor
from dehazer.types import BaseModel

__all__ = [
    "LossWeights",
    "reconstruction_loss",
    "discriminator_loss",
    "generator_adversarial_loss",
    "adversarial_losses",
    "generator_total_loss",
]


class LossWeights(BaseModel):
    lambda_adv: float = 1.0
    lambda_rec: float = 100.0

    @pydantic.validator("lambda_adv", "lambda_rec")
    def _non_negative(cls, value: float) -> float:
        if value < 0:
            raise ValueError("loss weights must be >= 0")
        return value

    @pydantic.root_validator(skip_on_failure=True)
    def _not_both_zero(cls, values):
        if values["lambda_adv"] == 0 and values["lambda_rec"] == 0:
            raise ValueError("lambda_adv and lambda_rec cannot both be zero")
        return values


def reconstruction_loss(pred: Tensor, target: Tensor) -> Tensor:
    """Mean absolute error."""
    if pred.shape != target.shape:
        raise DimensionError("prediction and target differ", axis="shape", expected=target.shape, actual=pred.shape)
    return (pred - target).abs().mean()


def _require_finite(name: str, scores: Tensor) -> None:
    if not scores.is_finite():
        raise NumericalError(f"non-finite discriminator scores in {name}")


def discriminator_loss(d_real: Tensor, d_fake: Tensor) -> Tensor:
    """Least-squares critic loss: real scores pulled to 1, fake scores to 0."""
    _require_finite("d_real", d_real)
    _require_finite("d_fake", d_fake)
    return (d_real - 1.0).square().mean() * 0.5 + d_fake.square().mean() * 0.5


def generator_adversarial_loss(d_fake: Tensor) -> Tensor:
    _require_finite("d_fake", d_fake)
    return (d_fake - 1.0).square().mean() * 0.5


def adversarial_losses(d_real: Tensor, d_fake: Tensor) -> Tuple[Tensor, Tensor]:
    """``(loss_D, loss_G_adv)`` for the same pair of score batches."""
    return discriminator_loss(d_real, d_fake), generator_adversarial_loss(d_fake)


_Loss = TypeVar("_Loss", Tensor, float)


def generator_total_loss(
    adv: Optional[Union[Tensor, float]],
    rec: _Loss,
    weights: Optional[LossWeights] = None,
) -> _Loss:
    """``lambda_adv * adv + lambda_rec * rec``; a missing adversarial term counts as zero."""
    weights = weights or LossWeights()
    total = weights.lambda_rec * rec
    if adv is not None:
        total = weights.lambda_adv * adv + total
    return total
