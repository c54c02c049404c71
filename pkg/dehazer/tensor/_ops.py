from __future__ import annotations

from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from dehazer.exceptions import DimensionError, ParameterError

from ._tensor import Tensor

__all__ = [
    "conv2d",
    "maxpool2d",
    "upsample_nearest2x",
    "concat_channels",
    "slice_channels",
    "dense",
    "global_avg_pool",
    "global_max_pool",
    "channel_mean",
    "channel_max",
]


def _require_feature_map(x: Tensor, name: str = "input") -> None:
    if x.ndim != 4:
        raise DimensionError(f"{name} must be (batch, channels, height, width)", axis="rank", expected=4, actual=x.ndim)


def conv2d(
    input: Tensor,
    weight: Tensor,
    bias: Optional[Tensor] = None,
    stride: int = 1,
    padding: int = 0,
) -> Tensor:
    _require_feature_map(input)
    _require_feature_map(weight, "weight")
    if stride < 1:
        raise ParameterError(f"stride must be >= 1, got {stride}")
    if padding < 0:
        raise ParameterError(f"padding must be >= 0, got {padding}")

    n, in_c, h, w = input.shape
    out_c, w_in_c, kh, kw = weight.shape
    if in_c != w_in_c:
        raise DimensionError("conv2d input channels do not match weight", axis="channels", expected=w_in_c, actual=in_c)
    if bias is not None and bias.shape != (out_c,):
        raise DimensionError("conv2d bias length does not match weight", axis="out_channels", expected=out_c, actual=bias.shape)

    out_h = (h + 2 * padding - kh) // stride + 1
    out_w = (w + 2 * padding - kw) // stride + 1
    if out_h < 1:
        raise DimensionError("conv2d kernel exceeds padded input", axis="height", expected=f">={kh}", actual=h + 2 * padding)
    if out_w < 1:
        raise DimensionError("conv2d kernel exceeds padded input", axis="width", expected=f">={kw}", actual=w + 2 * padding)

    x = input.data
    if padding:
        x = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    # (n, c, out_h, out_w, kh, kw)
    windows = sliding_window_view(x, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride][:, :, :out_h, :out_w]
    out = np.tensordot(windows, weight.data, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
    if bias is not None:
        out = out + bias.data.reshape(1, out_c, 1, 1)
    out = np.ascontiguousarray(out)

    padded_shape = x.shape

    def backward(g: np.ndarray):
        grad_weight = np.tensordot(g, windows, axes=([0, 2, 3], [0, 2, 3]))
        grad_bias = g.sum(axis=(0, 2, 3)) if bias is not None else None

        grad_input = None
        if input.requires_grad:
            # (n, out_h, out_w, c, kh, kw)
            cols = np.tensordot(g, weight.data, axes=([1], [0]))
            grad_padded = np.zeros(padded_shape, dtype=cols.dtype)
            h_span = stride * (out_h - 1) + 1
            w_span = stride * (out_w - 1) + 1
            for i in range(kh):
                for j in range(kw):
                    grad_padded[:, :, i : i + h_span : stride, j : j + w_span : stride] += cols[
                        :, :, :, :, i, j
                    ].transpose(0, 3, 1, 2)
            grad_input = grad_padded[:, :, padding : padding + h, padding : padding + w]
        return grad_input, grad_weight, grad_bias

    parents = (input, weight) if bias is None else (input, weight, bias)
    return Tensor.from_op(out, parents, backward)


def maxpool2d(input: Tensor, k: int, stride: Optional[int] = None, padding: int = 0) -> Tensor:
    """Max over k x k windows; padding contributes -inf so it never wins.

    Backward routes each output gradient to the first row-major argmax of its window.
    """
    _require_feature_map(input)
    stride = k if stride is None else stride
    if k < 1 or stride < 1 or padding < 0:
        raise ParameterError(f"invalid pooling geometry k={k}, stride={stride}, padding={padding}")

    n, c, h, w = input.shape
    if k == stride and padding == 0:
        if h % stride:
            raise DimensionError("pooled height not divisible by stride", axis="height", expected=f"multiple of {stride}", actual=h)
        if w % stride:
            raise DimensionError("pooled width not divisible by stride", axis="width", expected=f"multiple of {stride}", actual=w)
    if h + 2 * padding < k:
        raise DimensionError("pooling window exceeds padded input", axis="height", expected=f">={k}", actual=h + 2 * padding)
    if w + 2 * padding < k:
        raise DimensionError("pooling window exceeds padded input", axis="width", expected=f">={k}", actual=w + 2 * padding)

    x = input.data
    if padding:
        x = np.pad(
            x,
            ((0, 0), (0, 0), (padding, padding), (padding, padding)),
            constant_values=-np.inf,
        )
    out_h = (x.shape[2] - k) // stride + 1
    out_w = (x.shape[3] - k) // stride + 1
    windows = sliding_window_view(x, (k, k), axis=(2, 3))[:, :, ::stride, ::stride][:, :, :out_h, :out_w]
    flat = windows.reshape(n, c, out_h, out_w, k * k)
    argmax = flat.argmax(axis=-1)
    out = np.take_along_axis(flat, argmax[..., None], axis=-1)[..., 0]

    padded_shape = x.shape

    def backward(g: np.ndarray):
        rows = np.arange(out_h).reshape(1, 1, out_h, 1) * stride + argmax // k
        cols = np.arange(out_w).reshape(1, 1, 1, out_w) * stride + argmax % k
        batch_idx = np.arange(n).reshape(n, 1, 1, 1)
        chan_idx = np.arange(c).reshape(1, c, 1, 1)
        grad_padded = np.zeros(padded_shape, dtype=g.dtype)
        np.add.at(grad_padded, (batch_idx, chan_idx, rows, cols), g)
        return (grad_padded[:, :, padding : padding + h, padding : padding + w],)

    return Tensor.from_op(np.ascontiguousarray(out), (input,), backward)


def upsample_nearest2x(input: Tensor) -> Tensor:
    _require_feature_map(input)
    n, c, h, w = input.shape
    out = np.repeat(np.repeat(input.data, 2, axis=2), 2, axis=3)
    return Tensor.from_op(
        out,
        (input,),
        lambda g: (g.reshape(n, c, h, 2, w, 2).sum(axis=(3, 5)),),
    )


def concat_channels(a: Tensor, b: Tensor) -> Tensor:
    _require_feature_map(a, "a")
    _require_feature_map(b, "b")
    for axis, name in ((0, "batch"), (2, "height"), (3, "width")):
        if a.shape[axis] != b.shape[axis]:
            raise DimensionError(
                "concat_channels operands disagree",
                axis=name,
                expected=a.shape[axis],
                actual=b.shape[axis],
            )
    split = a.shape[1]
    return Tensor.from_op(
        np.concatenate([a.data, b.data], axis=1),
        (a, b),
        lambda g: (g[:, :split], g[:, split:]),
    )


def slice_channels(input: Tensor, start: int, stop: int) -> Tensor:
    _require_feature_map(input)
    channels = input.shape[1]
    if not 0 <= start < stop <= channels:
        raise DimensionError("channel slice out of range", axis="channels", expected=f"[{start}, {stop}) within {channels}", actual=channels)

    def backward(g: np.ndarray):
        grad = np.zeros(input.shape, dtype=g.dtype)
        grad[:, start:stop] = g
        return (grad,)

    return Tensor.from_op(input.data[:, start:stop].copy(), (input,), backward)


def dense(input: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    _require_feature_map(input)
    n, c, h, w = input.shape
    if (h, w) != (1, 1):
        raise DimensionError("dense expects 1x1 spatial input", axis="spatial", expected=(1, 1), actual=(h, w))
    if weight.ndim != 2 or weight.shape[1] != c:
        raise DimensionError("dense weight does not match input channels", axis="channels", expected=c, actual=weight.shape)
    out_features = weight.shape[0]

    x = input.data.reshape(n, c)
    out = x @ weight.data.T
    if bias is not None:
        out = out + bias.data

    def backward(g: np.ndarray):
        g2 = g.reshape(n, out_features)
        grad_input = (g2 @ weight.data).reshape(n, c, 1, 1)
        grad_weight = g2.T @ x
        grad_bias = g2.sum(axis=0) if bias is not None else None
        return grad_input, grad_weight, grad_bias

    parents = (input, weight) if bias is None else (input, weight, bias)
    return Tensor.from_op(out.reshape(n, out_features, 1, 1), parents, backward)


def global_avg_pool(input: Tensor) -> Tensor:
    _require_feature_map(input)
    n, c, h, w = input.shape
    area = h * w
    out = (input.data.sum(axis=(2, 3), keepdims=True, dtype=np.float64) / area).astype(input.dtype)
    return Tensor.from_op(
        out,
        (input,),
        lambda g: (np.broadcast_to(g / area, input.shape).astype(g.dtype),),
    )


def global_max_pool(input: Tensor) -> Tensor:
    _require_feature_map(input)
    n, c, h, w = input.shape
    flat = input.data.reshape(n, c, h * w)
    argmax = flat.argmax(axis=-1)
    out = np.take_along_axis(flat, argmax[..., None], axis=-1).reshape(n, c, 1, 1)

    def backward(g: np.ndarray):
        grad = np.zeros((n, c, h * w), dtype=g.dtype)
        np.put_along_axis(grad, argmax[..., None], g.reshape(n, c, 1), axis=-1)
        return (grad.reshape(input.shape),)

    return Tensor.from_op(out, (input,), backward)


def channel_mean(input: Tensor) -> Tensor:
    _require_feature_map(input)
    c = input.shape[1]
    out = (input.data.sum(axis=1, keepdims=True, dtype=np.float64) / c).astype(input.dtype)
    return Tensor.from_op(
        out,
        (input,),
        lambda g: (np.broadcast_to(g / c, input.shape).astype(g.dtype),),
    )


def channel_max(input: Tensor) -> Tensor:
    _require_feature_map(input)
    argmax = input.data.argmax(axis=1)[:, None]
    out = np.take_along_axis(input.data, argmax, axis=1)

    def backward(g: np.ndarray):
        grad = np.zeros(input.shape, dtype=g.dtype)
        np.put_along_axis(grad, argmax, g, axis=1)
        return (grad,)

    return Tensor.from_op(out, (input,), backward)
