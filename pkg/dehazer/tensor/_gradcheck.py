from __future__ import annotations

import contextlib
from typing import Callable, Iterator, List, Sequence, Union

import numpy as np

from dehazer.exceptions import DimensionError

from ._tensor import Parameter, Tensor

__all__ = ["finite_diff_gradcheck", "double_precision"]


Checkable = Union[Tensor, Parameter]


def _as_tensors(items: Sequence[Checkable]) -> List[Tensor]:
    return [item.value if isinstance(item, Parameter) else item for item in items]


@contextlib.contextmanager
def double_precision(items: Sequence[Checkable]) -> Iterator[List[Tensor]]:
    """Temporarily promote the given tensors to float64, restoring dtype and values on exit."""
    tensors = _as_tensors(items)
    originals = [tensor.data for tensor in tensors]
    try:
        for tensor in tensors:
            tensor.data = tensor.data.astype(np.float64)
        yield tensors
    finally:
        for tensor, original in zip(tensors, originals):
            tensor.data = original
            tensor.grad = None


def finite_diff_gradcheck(
    loss_fn: Callable[[], Tensor],
    params: Sequence[Checkable],
    *,
    step: float = 1e-3,
    samples: int = 20,
    seed: int = 0,
    atol: float = 1e-6,
) -> float:
    """Maximum relative error between analytic and central-difference gradients.

    ``loss_fn`` rebuilds the graph from the current parameter values and returns a
    scalar. Up to ``samples`` coordinates per parameter tensor are probed.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    with double_precision(params) as tensors:
        for tensor in tensors:
            tensor.grad = None
        loss = loss_fn()
        if loss.data.size != 1:
            raise DimensionError("gradcheck needs a scalar loss", axis="size", expected=1, actual=loss.data.size)
        loss.backward()
        analytic = [
            np.zeros_like(tensor.data) if tensor.grad is None else np.array(tensor.grad, dtype=np.float64)
            for tensor in tensors
        ]

        for tensor, grad in zip(tensors, analytic):
            flat = tensor.data.reshape(-1)
            count = flat.size
            picks = np.arange(count) if count <= samples else rng.choice(count, samples, replace=False)
            for index in picks:
                original = flat[index]
                flat[index] = original + step
                plus = loss_fn().item()
                flat[index] = original - step
                minus = loss_fn().item()
                flat[index] = original

                numeric = (plus - minus) / (2.0 * step)
                exact = grad.reshape(-1)[index]
                scale = max(abs(exact), abs(numeric), atol)
                worst = max(worst, abs(exact - numeric) / scale)
    return worst
