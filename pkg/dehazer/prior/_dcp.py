from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from dehazer.constants import AIRLIGHT_FLOOR, LUMA_WEIGHTS
from dehazer.exceptions import DimensionError, ParameterError
from dehazer.types import ImageRGB, TransmissionMap
from dehazer.utils.logging import logger

from ._params import AtmosphericLight, DcpParams

__all__ = [
    "dark_channel",
    "atmospheric_light",
    "estimate_transmission",
    "guided_filter",
    "recover_radiance",
    "dcp_dehaze",
    "luma",
]


def _require_image(img: np.ndarray) -> None:
    if img.ndim != 3 or img.shape[2] != 3:
        raise DimensionError("expected an H x W x 3 image", axis="channels", expected=3, actual=img.shape)


def _require_same_extent(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[:2] != b.shape[:2]:
        raise DimensionError("extents differ", axis="extent", expected=a.shape[:2], actual=b.shape[:2])


def luma(img: ImageRGB) -> np.ndarray:
    _require_image(img)
    return np.asarray(img, dtype=np.float64) @ np.asarray(LUMA_WEIGHTS)


def dark_channel(img: ImageRGB, patch: int) -> np.ndarray:
    """Patch minimum of the per-pixel channel minimum, borders replicated."""
    _require_image(img)
    if patch < 1 or patch % 2 == 0:
        raise ParameterError(f"patch must be an odd integer >= 1, got {patch}")
    per_pixel = np.min(img, axis=2)
    if patch == 1:
        return per_pixel.copy()
    return ndimage.minimum_filter(per_pixel, size=patch, mode="nearest")


def atmospheric_light(
    img: ImageRGB,
    dark: np.ndarray,
    bright_fraction: float = 0.001,
) -> AtmosphericLight:
    _require_image(img)
    _require_same_extent(img, dark)
    height, width = dark.shape
    count = max(1, math.ceil(bright_fraction * height * width))

    candidates = np.argsort(-dark.reshape(-1), kind="stable")[:count]
    pixels = img.reshape(-1, 3)[candidates].astype(np.float64)
    brightest = pixels[np.argmax(pixels.sum(axis=1))]
    light = AtmosphericLight.from_array(brightest, floor=AIRLIGHT_FLOOR)
    logger.debug("atmospheric light %s from %d candidates", light.rgb, count)
    return light


def estimate_transmission(
    img: ImageRGB,
    A: AtmosphericLight,
    params: Optional[DcpParams] = None,
) -> TransmissionMap:
    params = params or DcpParams()
    normalized = np.asarray(img, dtype=np.float64) / A.as_array()
    t = 1.0 - params.omega * dark_channel(normalized, params.patch)
    return np.clip(t, 0.0, 1.0)


def _box_mean(values: np.ndarray, radius: int) -> np.ndarray:
    return ndimage.uniform_filter(values, size=2 * radius + 1, mode="nearest")


def guided_filter(guide: np.ndarray, src: np.ndarray, radius: int, eps: float) -> np.ndarray:
    """Single-channel guided filter; every mean is a replicated-border box filter."""
    if guide.shape != src.shape:
        raise DimensionError("guide and source extents differ", axis="extent", expected=guide.shape, actual=src.shape)
    if radius < 1 or radius > min(guide.shape):
        raise ParameterError(f"guided filter radius {radius} does not fit a {guide.shape} map")
    if eps <= 0:
        raise ParameterError(f"guided filter eps must be > 0, got {eps}")

    guide = np.asarray(guide, dtype=np.float64)
    src = np.asarray(src, dtype=np.float64)

    mean_guide = _box_mean(guide, radius)
    mean_src = _box_mean(src, radius)
    cov = _box_mean(guide * src, radius) - mean_guide * mean_src
    var = _box_mean(guide * guide, radius) - mean_guide * mean_guide

    a = cov / (var + eps)
    b = mean_src - a * mean_guide
    return _box_mean(a, radius) * guide + _box_mean(b, radius)


def recover_radiance(
    img: ImageRGB,
    t: TransmissionMap,
    A: AtmosphericLight,
    t_floor: float = 0.1,
) -> ImageRGB:
    _require_image(img)
    _require_same_extent(img, t)
    airlight = A.as_array()
    bounded = np.maximum(np.asarray(t, dtype=np.float64), t_floor)[..., None]
    radiance = (np.asarray(img, dtype=np.float64) - airlight) / bounded + airlight
    return np.clip(radiance, 0.0, 1.0).astype(np.float32)


def dcp_dehaze(
    img: ImageRGB,
    params: Optional[DcpParams] = None,
) -> Tuple[ImageRGB, TransmissionMap]:
    """Classical dark-channel dehazing; returns the radiance and the refined transmission."""
    params = params or DcpParams()
    _require_image(img)

    dark = dark_channel(img, params.patch)
    light = atmospheric_light(img, dark, params.bright_fraction)
    raw = estimate_transmission(img, light, params)
    refined = np.clip(
        guided_filter(luma(img), raw, params.guided_radius, params.guided_eps), 0.0, 1.0
    )
    radiance = recover_radiance(img, refined, light, params.t_floor)
    return radiance, refined.astype(np.float32)
