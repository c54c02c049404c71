import numpy as np
import pytest

from dehazer.exceptions import DimensionError, NumericalError
from dehazer.tensor import Parameter, adam_step


def test_zero_gradient_leaves_parameter_unchanged():
    param = Parameter(np.array([0.3, -0.7]))
    before = param.data.copy()

    adam_step(param, np.zeros(2), lr=0.1)

    np.testing.assert_array_equal(param.data, before)
    assert param.step_count == 1


def test_first_step_moves_by_learning_rate():
    param = Parameter(np.array([1.0, 1.0]))

    adam_step(param, np.array([0.5, -2.0]), lr=0.01)

    np.testing.assert_allclose(param.data, [0.99, 1.01], rtol=1e-5)


def test_descends_a_parabola():
    param = Parameter(np.array([1.0]))

    for _ in range(100):
        adam_step(param, 2.0 * param.data, lr=0.1)

    assert abs(float(param.data[0])) < 0.1
    assert param.step_count == 100


def test_rejects_shape_mismatch():
    with pytest.raises(DimensionError):
        adam_step(Parameter(np.zeros(2)), np.zeros(3))


def test_rejects_non_finite_gradient():
    param = Parameter(np.zeros(2))

    with pytest.raises(NumericalError):
        adam_step(param, np.array([0.0, np.nan]))
    assert param.step_count == 0
