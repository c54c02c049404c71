import numpy as np
import pytest

from dehazer.exceptions import DimensionError
from dehazer.tensor import (
    ActivationName,
    Parameter,
    Tensor,
    activate,
    conv2d,
    double_precision,
    finite_diff_gradcheck,
)
from dehazer.tensor import _activation


def _conv_graph(rng, activation=None):
    x = Tensor(rng.standard_normal((1, 2, 6, 6)).astype(np.float32), requires_grad=True)
    weight = Parameter(rng.standard_normal((3, 2, 3, 3)))
    bias = Parameter(rng.standard_normal(3))

    def loss():
        out = conv2d(x, weight.value, bias.value, 1, 1)
        if activation is not None:
            out = activate(out, activation)
        return out.mean()

    return loss, [x, weight, bias]


def test_linear_graph_is_exact():
    loss, params = _conv_graph(np.random.default_rng(0))

    assert finite_diff_gradcheck(loss, params) < 1e-6


def test_conv_swish_mean():
    loss, params = _conv_graph(np.random.default_rng(1), ActivationName.SWISH)

    assert finite_diff_gradcheck(loss, params) < 1e-3


def test_detects_corrupted_backward(monkeypatch):
    loss, params = _conv_graph(np.random.default_rng(2), ActivationName.SWISH)
    swish_grad = _activation._DERIVATIVES[ActivationName.SWISH]
    monkeypatch.setitem(_activation._DERIVATIVES, ActivationName.SWISH, lambda x, slope: -swish_grad(x, slope))

    assert finite_diff_gradcheck(loss, params) > 0.5


def test_requires_scalar_loss():
    x = Tensor(np.ones((1, 1, 2, 2)), requires_grad=True)

    with pytest.raises(DimensionError):
        finite_diff_gradcheck(lambda: x * 2.0, [x])


def test_double_precision_restores_storage():
    param = Parameter(np.ones(3))
    original = param.data

    with double_precision([param]) as (tensor,):
        assert tensor.dtype == np.float64
        tensor.data[0] = 5.0

    assert param.data is original
    assert param.data.dtype == np.float32
    np.testing.assert_array_equal(param.data, np.ones(3))
