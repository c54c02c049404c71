from __future__ import annotations

import functools
import math

import numpy as np
from scipy.signal import convolve2d

from dehazer.constants import (
    PSNR_CAP_DB,
    PSNR_MSE_FLOOR,
    SSIM_K1,
    SSIM_K2,
    SSIM_SIGMA,
    SSIM_WINDOW,
)
from dehazer.exceptions import DimensionError, ParameterError
from dehazer.types import ImageRGB

__all__ = ["psnr", "ssim", "contrast_structure", "gaussian_window"]


def _pair(a: ImageRGB, b: ImageRGB) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError("images differ in extent", axis="extent", expected=a.shape, actual=b.shape)
    return a, b


def psnr(a: ImageRGB, b: ImageRGB) -> float:
    """Peak signal-to-noise ratio in dB for [0, 1] images, capped for identical inputs."""
    a, b = _pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse < PSNR_MSE_FLOOR:
        return PSNR_CAP_DB
    return 10.0 * math.log10(1.0 / mse)


@functools.lru_cache(maxsize=None)
def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    offsets = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    profile = np.exp(-(offsets**2) / (2.0 * sigma**2))
    window = np.outer(profile, profile)
    window /= window.sum()
    window.setflags(write=False)
    return window


def _filter(values: np.ndarray, window: np.ndarray) -> np.ndarray:
    # the window is symmetric so convolution equals correlation
    return convolve2d(values, window, mode="valid")


def _ssim_maps(a: np.ndarray, b: np.ndarray, window: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-window luminance and contrast-structure factors of one channel."""
    c1 = (SSIM_K1 * 1.0) ** 2
    c2 = (SSIM_K2 * 1.0) ** 2

    mu_a = _filter(a, window)
    mu_b = _filter(b, window)
    mu_a_sq = mu_a * mu_a
    mu_b_sq = mu_b * mu_b
    mu_ab = mu_a * mu_b
    sigma_a_sq = _filter(a * a, window) - mu_a_sq
    sigma_b_sq = _filter(b * b, window) - mu_b_sq
    sigma_ab = _filter(a * b, window) - mu_ab

    luminance = (2.0 * mu_ab + c1) / (mu_a_sq + mu_b_sq + c1)
    contrast = (2.0 * sigma_ab + c2) / (sigma_a_sq + sigma_b_sq + c2)
    return luminance, contrast


def _channels(a: ImageRGB, b: ImageRGB) -> tuple[np.ndarray, np.ndarray]:
    a, b = _pair(a, b)
    if a.ndim == 2:
        a, b = a[..., None], b[..., None]
    if a.ndim != 3:
        raise DimensionError("expected an H x W x C image", axis="rank", expected=3, actual=a.ndim)
    if a.shape[0] < SSIM_WINDOW or a.shape[1] < SSIM_WINDOW:
        raise ParameterError(
            f"ssim needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels, got {a.shape[0]}x{a.shape[1]}"
        )
    return a, b


def ssim(a: ImageRGB, b: ImageRGB) -> float:
    """Mean structural similarity, averaged over channels (L = 1)."""
    a, b = _channels(a, b)
    window = gaussian_window()
    per_channel = []
    for c in range(a.shape[2]):
        luminance, contrast = _ssim_maps(a[..., c], b[..., c], window)
        per_channel.append(np.mean(luminance * contrast))
    return float(np.mean(per_channel))


def contrast_structure(a: ImageRGB, b: ImageRGB) -> float:
    """SSIM without its luminance factor.

    Unlike ``ssim`` this is unchanged when the same constant is added to both images.
    """
    a, b = _channels(a, b)
    window = gaussian_window()
    return float(np.mean([np.mean(_ssim_maps(a[..., c], b[..., c], window)[1]) for c in range(a.shape[2])]))
