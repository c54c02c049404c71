import numpy as np
import pytest

from dehazer.exceptions import ConfigurationError
from dehazer.tensor import ActivationKind, ActivationName, Tensor, activate


def test_zero_and_negative_cases():
    x = Tensor(np.array([0.0, -1.0]))

    assert activate(x, "swish").data[0] == 0.0
    assert activate(x, "mish").data[0] == 0.0
    assert activate(x, "relu").data[1] == 0.0
    assert activate(x, "sigmoid").data[0] == 0.5
    np.testing.assert_allclose(activate(x, "leaky_relu(0.2)").data[1], -0.2)


def test_swish_derivative_at_zero():
    x = Tensor(np.array([0.0]), requires_grad=True)

    activate(x, ActivationName.SWISH).sum().backward()

    assert x.grad[0] == pytest.approx(0.5)


def test_mish_known_value():
    out = activate(Tensor(np.array([1.0])), "mish")

    assert out.data[0] == pytest.approx(np.tanh(np.log1p(np.e)), rel=1e-12)


@pytest.mark.parametrize("name", list(ActivationName))
def test_derivatives_match_central_differences(name: ActivationName):
    rng = np.random.default_rng(3)
    points = rng.uniform(-6.0, 6.0, size=1000)
    # keep clear of the kink at zero
    points = np.where(np.abs(points) < 1e-2, 0.5, points)
    kind = ActivationKind(name=name)
    step = 1e-6

    x = Tensor(points, requires_grad=True)
    activate(x, kind).sum().backward()
    plus = activate(Tensor(points + step), kind).data
    minus = activate(Tensor(points - step), kind).data

    np.testing.assert_allclose(x.grad, (plus - minus) / (2 * step), rtol=1e-4, atol=1e-8)


@pytest.mark.parametrize("name", list(ActivationName))
@pytest.mark.parametrize("dtype", [np.float32, np.float64])
def test_finite_over_wide_range(name: ActivationName, dtype):
    x = Tensor(np.linspace(-50.0, 50.0, 2001, dtype=dtype), requires_grad=True)

    out = activate(x, ActivationKind(name=name))
    out.sum().backward()

    assert np.all(np.isfinite(out.data))
    assert np.all(np.isfinite(x.grad))


@pytest.mark.parametrize(
    ["text", "name", "slope"],
    [
        ["relu", ActivationName.RELU, 0.1],
        ["Swish", ActivationName.SWISH, 0.1],
        [" leaky_relu ( 0.2 ) ", ActivationName.LEAKY_RELU, 0.2],
        ["mish", ActivationName.MISH, 0.1],
    ],
)
def test_parse(text: str, name: ActivationName, slope: float):
    kind = ActivationKind.parse(text)

    assert kind.name is name
    assert kind.slope == slope


@pytest.mark.parametrize("text", ["tanh", "relu(0.2)", "leaky_relu(1.5)", "leaky_relu(", ""])
def test_parse_rejects(text: str):
    with pytest.raises(ConfigurationError):
        ActivationKind.parse(text)


def test_str_round_trips():
    for text in ["relu", "leaky_relu(0.2)", "swish", "identity"]:
        assert str(ActivationKind.parse(text)) == text
