import numpy as np
import pytest

from dehazer.exceptions import DimensionError, ParameterError
from dehazer.metrics import contrast_structure, gaussian_window, psnr, ssim
from _testing.oracles import ssim_windowed


@pytest.fixture
def rng():
    return np.random.default_rng(13)


def test_psnr_analytic_cases():
    zeros, ones = np.zeros((8, 8, 3)), np.ones((8, 8, 3))

    assert psnr(zeros, zeros) == 100.0
    assert psnr(zeros, ones) == pytest.approx(0.0, abs=1e-9)
    assert psnr(zeros, np.full((8, 8, 3), 0.1)) == pytest.approx(20.0, abs=1e-9)


def test_psnr_is_symmetric(rng):
    a, b = rng.random((8, 8, 3)), rng.random((8, 8, 3))

    assert psnr(a, b) == psnr(b, a)


def test_psnr_decreases_with_noise(rng):
    clean = rng.random((16, 16, 3))
    noise = rng.uniform(-1.0, 1.0, clean.shape)

    scores = [psnr(clean, clean + amplitude * noise) for amplitude in (0.01, 0.02, 0.05, 0.1, 0.2)]

    assert all(earlier > later for earlier, later in zip(scores, scores[1:]))


def test_psnr_shape_mismatch():
    with pytest.raises(DimensionError):
        psnr(np.zeros((4, 4, 3)), np.zeros((4, 5, 3)))


def test_ssim_identity(rng):
    a = rng.random((16, 16, 3))

    assert ssim(a, a) == 1.0


def test_ssim_constant_black_vs_white():
    c1 = 1e-4

    value = ssim(np.zeros((16, 16, 3)), np.ones((16, 16, 3)))

    assert value == pytest.approx(c1 / (1 + c1), rel=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_ssim_matches_windowed_oracle(seed: int):
    rng = np.random.default_rng(seed)
    a, b = rng.random((32, 32, 3)), rng.random((32, 32, 3))

    assert ssim(a, b) == pytest.approx(ssim_windowed(a, b), abs=1e-6)


def test_ssim_is_symmetric(rng):
    a, b = rng.random((16, 16, 3)), rng.random((16, 16, 3))

    assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-9)


@pytest.mark.parametrize("shift", [-0.2, 0.1, 0.3])
def test_contrast_structure_ignores_a_common_shift(rng, shift: float):
    a = 0.3 + 0.4 * rng.random((24, 24, 3))
    b = np.clip(a + rng.normal(0.0, 0.05, a.shape), 0.3, 0.7)

    assert contrast_structure(a + shift, b + shift) == pytest.approx(contrast_structure(a, b), abs=1e-6)


def test_ssim_luminance_factor_depends_on_level(rng):
    a = 0.3 + 0.4 * rng.random((24, 24, 3))
    b = a + 0.05

    assert contrast_structure(a, b) == pytest.approx(1.0, abs=1e-9)
    assert ssim(a, b) < 1.0
    assert ssim(a + 0.2, b + 0.2) != pytest.approx(ssim(a, b), abs=1e-6)
    assert ssim(a + 0.2, b + 0.2) == pytest.approx(ssim(a, b), abs=1e-2)


def test_ssim_accepts_grayscale(rng):
    a = rng.random((12, 12))

    assert ssim(a, a) == 1.0


def test_ssim_needs_a_full_window():
    with pytest.raises(ParameterError):
        ssim(np.zeros((10, 16, 3)), np.zeros((10, 16, 3)))


def test_gaussian_window_is_normalized_and_read_only():
    window = gaussian_window()

    assert window.shape == (11, 11)
    assert window.sum() == pytest.approx(1.0)
    assert window[5, 5] == window.max()
    with pytest.raises(ValueError):
        window[0, 0] = 1.0
