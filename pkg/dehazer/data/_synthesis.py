from __future__ import annotations

from typing import Tuple, Union

import numpy as np
from scipy import ndimage

from dehazer.constants import TRANSMISSION_FIELD_FLOOR
from dehazer.exceptions import DimensionError, ParameterError
from dehazer.prior import AtmosphericLight
from dehazer.types import ImageRGB, TransmissionMap

__all__ = [
    "Extent",
    "SeedLike",
    "as_extent",
    "random_transmission_field",
    "random_airlight",
    "synthesize_haze",
    "procedural_scene",
]


Extent = Union[int, Tuple[int, int]]
SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]

# every SPECKLE_CELL x SPECKLE_CELL cell outside the sky block holds one near-black value
SPECKLE_CELL = 4


def as_extent(extent: Extent) -> Tuple[int, int]:
    height, width = (extent, extent) if isinstance(extent, int) else extent
    if height < 1 or width < 1:
        raise ParameterError(f"extent must be positive, got {height}x{width}")
    return int(height), int(width)


def random_transmission_field(
    extent: Extent,
    beta_range: Tuple[float, float] = (0.5, 1.5),
    seed: SeedLike = 0,
) -> TransmissionMap:
    """Smooth seeded pseudo-depth turned into transmission through ``exp(-beta * depth)``."""
    height, width = as_extent(extent)
    low, high = beta_range
    if low < 0 or high < low:
        raise ParameterError(f"invalid beta range {beta_range}")
    rng = np.random.default_rng(seed)

    noise = rng.random((height, width))
    depth = ndimage.gaussian_filter(noise, sigma=max(height, width) / 4.0, mode="nearest")
    spread = depth.max() - depth.min()
    depth = (depth - depth.min()) / spread if spread > 0 else np.zeros_like(depth)

    beta = rng.uniform(low, high)
    t = np.exp(-beta * depth)
    return np.clip(t, TRANSMISSION_FIELD_FLOOR, 1.0).astype(np.float32)


def random_airlight(seed: SeedLike) -> AtmosphericLight:
    """Near-achromatic light in [0.7, 1] per channel."""
    rng = np.random.default_rng(seed)
    base = rng.uniform(0.75, 1.0)
    return AtmosphericLight.from_array(np.clip(base + rng.uniform(-0.05, 0.05, size=3), 0.7, 1.0))


def _airlight_array(A: Union[AtmosphericLight, np.ndarray]) -> np.ndarray:
    if isinstance(A, AtmosphericLight):
        return A.as_array()
    return np.asarray(A, dtype=np.float64)


def synthesize_haze(
    clean: ImageRGB,
    t: TransmissionMap,
    A: Union[AtmosphericLight, np.ndarray],
) -> ImageRGB:
    """Atmospheric scattering model ``I = J * t + A * (1 - t)``, clamped to [0, 1].

    ``A`` may also be a per-pixel H x W x 3 array.
    """
    clean = np.asarray(clean, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if t.ndim == 3:
        t = t[..., 0]
    if clean.shape[:2] != t.shape:
        raise DimensionError("image and transmission extents differ", axis="extent", expected=clean.shape[:2], actual=t.shape)
    t = t[..., None]
    hazy = clean * t + _airlight_array(A) * (1.0 - t)
    return np.clip(hazy, 0.0, 1.0).astype(np.float32)


def _gradient_background(height: int, width: int, rng: np.random.Generator) -> np.ndarray:
    start, stop = rng.uniform(0.1, 0.7, size=(2, 3))
    angle = rng.uniform(0.0, 2.0 * np.pi)
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    ramp = rows * np.sin(angle) + cols * np.cos(angle)
    ramp = (ramp - ramp.min()) / max(ramp.max() - ramp.min(), 1e-12)
    return start + ramp[..., None] * (stop - start)


def _paint_shapes(scene: np.ndarray, rng: np.random.Generator) -> None:
    height, width = scene.shape[:2]
    rows, cols = np.mgrid[0:height, 0:width]
    for _ in range(int(rng.integers(2, 5))):
        top, left = rng.integers(0, height), rng.integers(0, width)
        bottom = min(height, top + int(rng.integers(height // 8 + 1, height // 2 + 2)))
        right = min(width, left + int(rng.integers(width // 8 + 1, width // 2 + 2)))
        scene[top:bottom, left:right] = rng.uniform(0.0, 0.9, size=3)
    for _ in range(int(rng.integers(1, 4))):
        cy, cx = rng.uniform(0, height), rng.uniform(0, width)
        radius = rng.uniform(min(height, width) / 10.0, min(height, width) / 4.0)
        scene[(rows - cy) ** 2 + (cols - cx) ** 2 <= radius**2] = rng.uniform(0.0, 0.9, size=3)


def _sky_block(height: int, width: int, rng: np.random.Generator) -> Tuple[slice, slice]:
    side_h, side_w = max(1, height // 3), max(1, width // 3)
    top = int(rng.integers(0, height // 4 + 1))
    left = int(rng.integers(0, width - side_w + 1))
    return slice(top, top + side_h), slice(left, left + side_w)


def _speckle(scene: np.ndarray, keep: np.ndarray, rng: np.random.Generator) -> None:
    height, width = scene.shape[:2]
    for top in range(0, height, SPECKLE_CELL):
        for left in range(0, width, SPECKLE_CELL):
            cell_h = min(SPECKLE_CELL, height - top)
            cell_w = min(SPECKLE_CELL, width - left)
            row = top + int(rng.integers(0, cell_h))
            col = left + int(rng.integers(0, cell_w))
            channel = int(rng.integers(0, 3))
            if not keep[row, col]:
                scene[row, col, channel] = rng.uniform(0.0, 0.03)


def procedural_scene(extent: Extent, seed: SeedLike = 0) -> ImageRGB:
    """Seeded haze-free scene: a color ramp with rectangles, disks and smoothed noise.

    A near-white block plays the sky; elsewhere every 4x4 cell carries a near-black
    channel value so dark-channel patches stay dark.
    """
    height, width = as_extent(extent)
    rng = np.random.default_rng(seed)

    scene = _gradient_background(height, width, rng)
    _paint_shapes(scene, rng)
    texture = ndimage.gaussian_filter(rng.normal(size=(height, width, 3)), sigma=(2.0, 2.0, 0.0))
    scene += 0.05 * texture

    sky = np.zeros((height, width), dtype=bool)
    rows, cols = _sky_block(height, width, rng)
    sky[rows, cols] = True
    scene[sky] = rng.uniform(0.9, 1.0, size=3)

    scene = np.clip(scene, 0.0, 1.0)
    _speckle(scene, sky, rng)
    return scene.astype(np.float32)
