import numpy as np
import pytest

from dehazer.exceptions import DimensionError, ParameterError
from dehazer.data import (
    as_extent,
    procedural_scene,
    random_airlight,
    random_transmission_field,
    synthesize_haze,
)
from dehazer.prior import AtmosphericLight


def test_as_extent():
    assert as_extent(8) == (8, 8)
    assert as_extent((4, 6)) == (4, 6)
    with pytest.raises(ParameterError):
        as_extent((0, 4))


def test_transmission_field_is_seeded():
    first = random_transmission_field(24, seed=5)

    np.testing.assert_array_equal(first, random_transmission_field(24, seed=5))
    assert not np.array_equal(first, random_transmission_field(24, seed=6))


@pytest.mark.parametrize("seed", range(5))
def test_transmission_field_range_and_spread(seed: int):
    t = random_transmission_field((24, 32), seed=seed)

    assert t.shape == (24, 32)
    assert t.min() >= 0.05
    assert t.max() <= 1.0
    assert t.max() - t.min() >= 0.3


def test_transmission_field_without_scattering_is_clear():
    np.testing.assert_array_equal(random_transmission_field(16, beta_range=(0.0, 0.0)), np.ones((16, 16)))


def test_transmission_field_rejects_bad_beta():
    with pytest.raises(ParameterError):
        random_transmission_field(8, beta_range=(1.0, 0.5))


@pytest.mark.parametrize("seed", range(5))
def test_random_airlight_is_bright(seed: int):
    light = random_airlight(seed).as_array()

    assert np.all((light >= 0.7) & (light <= 1.0))


def test_synthesize_haze_limits():
    rng = np.random.default_rng(0)
    clean = rng.random((6, 6, 3))
    A = AtmosphericLight.from_array(np.array([0.9, 0.8, 0.85]))

    np.testing.assert_allclose(synthesize_haze(clean, np.ones((6, 6)), A), clean, atol=1e-7)
    np.testing.assert_allclose(synthesize_haze(clean, np.zeros((6, 6)), A), np.broadcast_to(A.as_array(), (6, 6, 3)), atol=1e-7)
    np.testing.assert_allclose(
        synthesize_haze(clean, np.full((6, 6), 0.5), A), 0.5 * clean + 0.5 * A.as_array(), atol=1e-7
    )


def test_synthesize_haze_accepts_per_pixel_light():
    light = np.full((4, 4, 3), 0.6)

    hazy = synthesize_haze(np.zeros((4, 4, 3)), np.full((4, 4), 0.5), light)

    np.testing.assert_allclose(hazy, 0.3, atol=1e-7)


def test_synthesize_haze_extent_mismatch():
    with pytest.raises(DimensionError):
        synthesize_haze(np.zeros((4, 4, 3)), np.ones((4, 5)), AtmosphericLight.from_array(np.ones(3)))


def test_procedural_scene():
    scene = procedural_scene((20, 28), seed=3)

    assert scene.shape == (20, 28, 3)
    assert scene.dtype == np.float32
    assert scene.min() >= 0.0 and scene.max() <= 1.0
    np.testing.assert_array_equal(scene, procedural_scene((20, 28), seed=3))
    assert not np.array_equal(scene, procedural_scene((20, 28), seed=4))


def test_procedural_scene_has_a_sky_and_dark_pixels():
    scene = procedural_scene(48, seed=0)

    assert np.any(scene.min(axis=2) >= 0.9)
    assert np.count_nonzero(scene.min(axis=2) <= 0.03) >= 48 * 48 // 32
