import numpy as np
import pytest

from dehazer.data import procedural_scene, random_transmission_field, synthesize_haze
from dehazer.exceptions import ConfigurationError, DimensionError, ParameterError
from dehazer.prior import (
    AtmosphericLight,
    DcpParams,
    atmospheric_light,
    dark_channel,
    dcp_dehaze,
    estimate_transmission,
    guided_filter,
    luma,
    recover_radiance,
)
from _testing.oracles import box_mean_loops, dark_channel_loops, guided_filter_loops


@pytest.fixture
def rng():
    return np.random.default_rng(11)


def test_dark_channel_of_constant_image():
    img = np.broadcast_to(np.array([0.5, 0.7, 0.9], dtype=np.float32), (8, 8, 3))

    np.testing.assert_array_equal(dark_channel(img, 15), np.full((8, 8), np.float32(0.5)))
    np.testing.assert_array_equal(dark_channel(np.zeros((8, 8, 3)), 3), np.zeros((8, 8)))


@pytest.mark.parametrize("patch", [1, 3, 5])
def test_dark_channel_matches_brute_force(rng, patch: int):
    img = rng.random((9, 9, 3))

    np.testing.assert_array_equal(dark_channel(img, patch), dark_channel_loops(img, patch))


def test_dark_channel_is_monotone(rng):
    img = rng.random((10, 10, 3))
    brighter = img.copy()
    brighter[4, 6] = np.minimum(brighter[4, 6] + 0.3, 1.0)

    assert np.all(dark_channel(brighter, 3) >= dark_channel(img, 3))


@pytest.mark.parametrize("patch", [0, 2, -1])
def test_dark_channel_rejects_patch(patch: int):
    with pytest.raises(ParameterError):
        dark_channel(np.zeros((4, 4, 3)), patch)


def test_dark_channel_rejects_grayscale():
    with pytest.raises(DimensionError):
        dark_channel(np.zeros((4, 4)), 3)


def test_atmospheric_light_of_uniform_image():
    img = np.broadcast_to(np.array([0.6, 0.7, 0.8]), (10, 10, 3))

    light = atmospheric_light(img, dark_channel(img, 3))

    np.testing.assert_allclose(light.rgb, (0.6, 0.7, 0.8))


def test_atmospheric_light_finds_white_region():
    img = np.zeros((20, 20, 3))
    img[5:8, 10:13] = 1.0

    light = atmospheric_light(img, dark_channel(img, 1), bright_fraction=0.001)

    assert light.rgb == (1.0, 1.0, 1.0)


def test_atmospheric_light_is_floored():
    img = np.zeros((6, 6, 3))

    light = atmospheric_light(img, dark_channel(img, 3))

    assert light.rgb == (0.05, 0.05, 0.05)


def test_atmospheric_light_single_candidate():
    img = np.full((10, 10, 3), 0.2)
    img[3, 3] = [0.9, 0.6, 0.5]

    light = atmospheric_light(img, dark_channel(img, 1), bright_fraction=1e-6)

    np.testing.assert_allclose(light.rgb, (0.9, 0.6, 0.5))


def test_transmission_of_airlight_image():
    light = AtmosphericLight(rgb=(0.8, 0.9, 0.7))
    img = np.broadcast_to(light.as_array(), (8, 8, 3))

    t = estimate_transmission(img, light, DcpParams(patch=3))

    np.testing.assert_allclose(t, 0.05, atol=1e-12)


def test_transmission_of_black_image():
    t = estimate_transmission(np.zeros((8, 8, 3)), AtmosphericLight(rgb=(1.0, 1.0, 1.0)), DcpParams(patch=3))

    np.testing.assert_array_equal(t, np.ones((8, 8)))


def test_transmission_matches_composed_oracle(rng):
    img = rng.random((9, 9, 3))
    light = AtmosphericLight(rgb=(0.9, 0.95, 1.0))
    params = DcpParams(patch=3, omega=0.9)

    expected = np.clip(1.0 - 0.9 * dark_channel_loops(img / light.as_array(), 3), 0.0, 1.0)

    np.testing.assert_allclose(estimate_transmission(img, light, params), expected, atol=1e-12)


def test_guided_filter_keeps_constant_source(rng):
    guide = rng.random((12, 12))

    out = guided_filter(guide, np.full((12, 12), 0.4), 2, 1e-3)

    np.testing.assert_allclose(out, 0.4, atol=1e-9)


def test_guided_filter_with_constant_guide_box_filters_twice(rng):
    src = rng.random((12, 12))

    out = guided_filter(np.full((12, 12), 0.5), src, 2, 1e-3)

    np.testing.assert_allclose(out, box_mean_loops(box_mean_loops(src, 2), 2), atol=1e-9)


def test_guided_filter_self_guided_is_near_identity(rng):
    src = rng.random((16, 16))

    out = guided_filter(src, src, 2, 1e-8)

    assert np.abs(out - src).max() < 1e-3


def test_guided_filter_matches_oracle(rng):
    guide, src = rng.random((12, 12)), rng.random((12, 12))

    np.testing.assert_allclose(guided_filter(guide, src, 3, 1e-2), guided_filter_loops(guide, src, 3, 1e-2), atol=1e-5)


def test_guided_filter_is_linear_in_source(rng):
    guide, first, second = rng.random((3, 16, 16))
    alpha, beta = 0.7, -1.3

    combined = guided_filter(guide, alpha * first + beta * second, 3, 1e-3)
    separate = alpha * guided_filter(guide, first, 3, 1e-3) + beta * guided_filter(guide, second, 3, 1e-3)

    np.testing.assert_allclose(combined, separate, atol=1e-5)


def test_guided_filter_rejects_bad_arguments():
    with pytest.raises(DimensionError):
        guided_filter(np.zeros((4, 4)), np.zeros((4, 5)), 1, 1e-3)
    with pytest.raises(ParameterError):
        guided_filter(np.zeros((4, 4)), np.zeros((4, 4)), 0, 1e-3)
    with pytest.raises(ParameterError):
        guided_filter(np.zeros((4, 4)), np.zeros((4, 4)), 1, 0.0)


def test_recover_radiance_identities(rng):
    img = rng.random((6, 6, 3)).astype(np.float32)
    light = AtmosphericLight(rgb=(0.9, 0.8, 1.0))

    np.testing.assert_array_equal(recover_radiance(img, np.ones((6, 6)), light), img)

    veiled = np.broadcast_to(light.as_array(), (6, 6, 3))
    np.testing.assert_allclose(recover_radiance(veiled, rng.random((6, 6)), light), veiled, atol=1e-6)


def test_recover_inverts_synthesis():
    for seed in range(100):
        clean = np.random.default_rng(seed).random((16, 16, 3))
        t = random_transmission_field(16, seed=seed)
        light = AtmosphericLight(rgb=(0.85, 0.9, 0.95))

        recovered = recover_radiance(synthesize_haze(clean, t, light), t, light, t_floor=0.1)

        mask = t >= 0.1
        assert np.abs(recovered - clean)[mask].max() <= 1e-6


def test_luma_weights():
    np.testing.assert_allclose(luma(np.ones((2, 2, 3))), np.ones((2, 2)))
    np.testing.assert_allclose(luma(np.array([[[1.0, 0.0, 0.0]]])), [[0.299]])


def test_dcp_on_haze_free_scene():
    scene = procedural_scene(48, seed=3)

    radiance, t = dcp_dehaze(scene)

    assert t.mean() > 0.8
    assert 0.0 <= radiance.min() and radiance.max() <= 1.0


def test_dcp_on_uniform_haze():
    scene = procedural_scene(48, seed=5)
    hazy = synthesize_haze(scene, np.full((48, 48), 0.5), AtmosphericLight(rgb=(0.95, 0.95, 0.95)))

    radiance, t = dcp_dehaze(hazy)

    assert np.abs(t - 0.5).mean() <= 0.15
    assert radiance.shape == hazy.shape
    assert t.dtype == np.float32
    assert 0.0 <= t.min() and t.max() <= 1.0


@pytest.mark.parametrize(
    "values",
    [
        {"patch": 4},
        {"omega": 0.0},
        {"omega": 1.2},
        {"t_floor": 1.0},
        {"guided_radius": 0},
        {"guided_eps": 0.0},
        {"unknown": 1},
    ],
)
def test_dcp_params_validation(values):
    with pytest.raises(ConfigurationError):
        DcpParams.checked(**values)


def test_dcp_params_default_radius_follows_scale(global_configuration, monkeypatch):
    assert DcpParams().guided_radius == 8

    monkeypatch.setattr(global_configuration, "SCALE", "full")

    assert DcpParams().guided_radius == 40
