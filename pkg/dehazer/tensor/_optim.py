from __future__ import annotations

from typing import Union

import numpy as np

from dehazer.exceptions import DimensionError, NumericalError

from ._tensor import Parameter, Tensor

__all__ = ["adam_step"]


def adam_step(
    param: Parameter,
    grad: Union[Tensor, np.ndarray],
    lr: float = 1e-4,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """Bias-corrected Adam update applied to ``param`` in place."""
    g = grad.data if isinstance(grad, Tensor) else np.asarray(grad)
    if g.shape != param.shape:
        raise DimensionError("gradient shape does not match parameter", axis="shape", expected=param.shape, actual=g.shape)
    if not np.all(np.isfinite(g)):
        raise NumericalError(
            f"non-finite gradient for parameter of shape {param.shape} at step {param.step_count + 1}"
        )

    g = g.astype(np.float64)
    step = param.step_count + 1
    first = beta1 * param.first_moment.astype(np.float64) + (1.0 - beta1) * g
    second = beta2 * param.second_moment.astype(np.float64) + (1.0 - beta2) * g * g
    first_hat = first / (1.0 - beta1**step)
    second_hat = second / (1.0 - beta2**step)
    update = lr * first_hat / (np.sqrt(second_hat) + eps)

    dtype = param.data.dtype
    param.first_moment = first.astype(dtype)
    param.second_moment = second.astype(dtype)
    param.data = (param.data.astype(np.float64) - update).astype(dtype)
    param.step_count = step
