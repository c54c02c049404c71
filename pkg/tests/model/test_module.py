import numpy as np

from dehazer.model import Activation, Conv2d, ConvStage, Dense, Sequential
from dehazer.tensor import ActivationKind, ActivationName, Tensor, global_avg_pool

RELU = ActivationKind(name=ActivationName.RELU)


def test_parameters_follow_assignment_order():
    rng = np.random.default_rng(0)
    stage = ConvStage(2, 4, 2, 3, RELU, rng)

    names = [name for name, _ in stage.named_parameters()]

    assert names == ["0.weight", "0.bias", "2.weight", "2.bias"]
    assert len(stage) == 4
    assert isinstance(stage[1], Activation)
    assert stage.num_parameters() == (4 * 2 * 9 + 4) + (4 * 4 * 9 + 4)


def test_state_dict_shapes():
    conv = Conv2d(3, 5, 3, np.random.default_rng(0))

    state = conv.state_dict()

    assert list(state) == ["weight", "bias"]
    assert state["weight"].shape == (5, 3, 3, 3)
    np.testing.assert_array_equal(state["bias"], np.zeros(5))


def test_he_uniform_initialization_is_bounded():
    conv = Conv2d(8, 16, 3, np.random.default_rng(1))

    assert np.abs(conv.weight.data).max() <= np.sqrt(6.0 / (8 * 9))


def test_conv2d_padding_keeps_extent():
    conv = Conv2d(2, 3, 5, np.random.default_rng(0))
    strided = Conv2d(2, 3, 3, np.random.default_rng(0), stride=2, padding=1)
    x = Tensor(np.ones((1, 2, 8, 8)))

    assert conv(x).shape == (1, 3, 8, 8)
    assert strided(x).shape == (1, 3, 4, 4)


def test_sequential_chains_and_zero_grad():
    rng = np.random.default_rng(0)
    net = Sequential([Conv2d(1, 2, 3, rng), Activation(RELU)])
    head = Dense(2, 1, rng)
    x = Tensor(rng.random((1, 1, 4, 4)))

    out = head(global_avg_pool(net(x)))
    out.sum().backward()

    assert all(param.grad is not None for param in head.parameters())
    head.zero_grad()
    assert all(param.grad is None or not param.grad.any() for param in head.parameters())
