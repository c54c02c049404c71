from __future__ import annotations

from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from dehazer.exceptions import DimensionError

__all__ = ["Tensor", "Parameter", "as_tensor"]


GradFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]
Operand = Union["Tensor", float, int, np.ndarray]


class Tensor:
    """A numpy array with an optional gradient buffer and a reverse-mode tape.

    Feature maps are laid out (batch, channels, height, width), width fastest.
    Storage is single precision unless a caller hands in float64 data, which
    every op then preserves.
    """

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data: Union[np.ndarray, Sequence, float], *, requires_grad: bool = False):
        array = np.asarray(data)
        if not np.issubdtype(array.dtype, np.floating):
            array = array.astype(np.float32)
        self.data: np.ndarray = array
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self._parents: Tuple[Tensor, ...] = ()
        self._backward: Optional[GradFn] = None

    @classmethod
    def from_op(cls, data: np.ndarray, parents: Sequence[Tensor], backward: GradFn) -> Tensor:
        requires_grad = any(parent.requires_grad for parent in parents)
        out = cls(data, requires_grad=requires_grad)
        if requires_grad:
            out._parents = tuple(parents)
            out._backward = backward
        return out

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    @property
    def is_leaf(self) -> bool:
        return self._backward is None

    def item(self) -> float:
        if self.data.size != 1:
            raise DimensionError("item() needs a single-element tensor", axis="size", expected=1, actual=self.data.size)
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> Tensor:
        return Tensor(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.data)))

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, dtype={self.dtype}, requires_grad={self.requires_grad})"

    def _walk(self) -> Iterator[Tensor]:
        # iterative post-order so deep decoders do not hit the recursion limit
        visited: set[int] = set()
        order: list[Tensor] = []
        stack: list[Tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        return reversed(order)

    def backward(self, grad: Optional[np.ndarray] = None) -> None:
        if not self.requires_grad:
            return
        if grad is None:
            if self.data.size != 1:
                raise DimensionError(
                    "backward() without a seed gradient needs a scalar output",
                    axis="size",
                    expected=1,
                    actual=self.data.size,
                )
            grad = np.ones_like(self.data)

        pending: dict[int, np.ndarray] = {id(self): grad}
        for node in self._walk():
            node_grad = pending.pop(id(node), None)
            if node_grad is None:
                continue
            if node._backward is None:
                node.grad = node_grad if node.grad is None else node.grad + node_grad
                continue
            for parent, parent_grad in zip(node._parents, node._backward(node_grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                pending[key] = parent_grad if key not in pending else pending[key] + parent_grad

    # elementwise arithmetic, numpy broadcasting
    def __add__(self, other: Operand) -> Tensor:
        other = as_tensor(other, like=self)
        return Tensor.from_op(
            self.data + other.data,
            (self, other),
            lambda g: (_unbroadcast(g, self.shape), _unbroadcast(g, other.shape)),
        )

    __radd__ = __add__

    def __neg__(self) -> Tensor:
        return Tensor.from_op(-self.data, (self,), lambda g: (-g,))

    def __sub__(self, other: Operand) -> Tensor:
        return self + (-as_tensor(other, like=self))

    def __rsub__(self, other: Operand) -> Tensor:
        return as_tensor(other, like=self) + (-self)

    def __mul__(self, other: Operand) -> Tensor:
        other = as_tensor(other, like=self)
        return Tensor.from_op(
            self.data * other.data,
            (self, other),
            lambda g: (
                _unbroadcast(g * other.data, self.shape),
                _unbroadcast(g * self.data, other.shape),
            ),
        )

    __rmul__ = __mul__

    def abs(self) -> Tensor:
        return Tensor.from_op(np.abs(self.data), (self,), lambda g: (g * np.sign(self.data),))

    def square(self) -> Tensor:
        return Tensor.from_op(self.data * self.data, (self,), lambda g: (2.0 * g * self.data,))

    def sum(self) -> Tensor:
        total = np.sum(self.data, dtype=np.float64).astype(self.dtype)
        return Tensor.from_op(
            total.reshape(()),
            (self,),
            lambda g: (np.full(self.shape, g, dtype=self.dtype),),
        )

    def mean(self) -> Tensor:
        count = self.data.size
        total = (np.sum(self.data, dtype=np.float64) / count).astype(self.dtype)
        return Tensor.from_op(
            total.reshape(()),
            (self,),
            lambda g: (np.full(self.shape, g / count, dtype=self.dtype),),
        )


def as_tensor(value: Operand, *, like: Optional[Tensor] = None) -> Tensor:
    if isinstance(value, Tensor):
        return value
    dtype = like.dtype if like is not None else np.float32
    return Tensor(np.asarray(value, dtype=dtype))


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, extent in enumerate(shape) if extent == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Parameter:
    """A trainable tensor plus the Adam moment buffers that belong to it."""

    __slots__ = ("value", "first_moment", "second_moment", "step_count")

    def __init__(self, data: np.ndarray) -> None:
        self.value = Tensor(np.asarray(data, dtype=np.float32), requires_grad=True)
        self.first_moment = np.zeros_like(self.value.data)
        self.second_moment = np.zeros_like(self.value.data)
        self.step_count = 0

    @property
    def data(self) -> np.ndarray:
        return self.value.data

    @data.setter
    def data(self, array: np.ndarray) -> None:
        self.value.data = array

    @property
    def grad(self) -> Optional[np.ndarray]:
        return self.value.grad

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def zero_grad(self) -> None:
        self.value.grad = None

    def __repr__(self) -> str:
        return f"Parameter(shape={self.shape}, step_count={self.step_count})"
