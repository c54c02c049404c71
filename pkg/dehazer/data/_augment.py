from __future__ import annotations

import math
from typing import Optional, Sequence, Tuple

import numpy as np
import pydantic

from dehazer.exceptions import DimensionError, ParameterError
from dehazer.types import BaseModel

from ._dataset import HazePair
from ._synthesis import Extent, as_extent

__all__ = [
    "CutoutSpec",
    "AugmentSpec",
    "AUGMENTATION_SETTINGS",
    "augmentation_setting",
    "crop_pair",
    "hflip_pair",
    "cutout_pair",
    "augment",
    "mosaic4",
]


class CutoutSpec(BaseModel):
    count: int = 1
    max_fraction: float = 0.125

    @pydantic.validator("count")
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError("cutout count must be >= 1")
        return value

    @pydantic.validator("max_fraction")
    def _fraction_range(cls, value: float) -> float:
        if not 0.0 < value <= 0.25:
            raise ValueError("cutout max_fraction must be in (0, 0.25]")
        return value


class AugmentSpec(BaseModel):
    crop: Optional[int] = None
    hflip_prob: float = 0.0
    cutout: Optional[CutoutSpec] = None
    mosaic_prob: float = 0.0
    seed: int = 0

    @pydantic.validator("crop")
    def _positive_crop(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("crop extent must be >= 1")
        return value

    @pydantic.validator("hflip_prob", "mosaic_prob")
    def _probability(cls, value: float) -> float:
        if not 0.0 <= value <= 1.0:
            raise ValueError("probabilities must be in [0, 1]")
        return value

    @property
    def is_identity(self) -> bool:
        return self.crop is None and self.hflip_prob == 0 and self.cutout is None and self.mosaic_prob == 0


def augmentation_setting(name: str, crop: int, seed: int = 0) -> AugmentSpec:
    """Named augmentation settings compared by the augmentation ablation."""
    settings = {
        "none": {},
        "crop": {"crop": crop},
        "hflip": {"hflip_prob": 0.5},
        "cutout": {"cutout": CutoutSpec()},
        "mosaic": {"mosaic_prob": 0.5},
        "all": {"crop": crop, "hflip_prob": 0.5, "cutout": CutoutSpec(), "mosaic_prob": 0.5},
    }
    if name not in settings:
        raise ParameterError(f"unknown augmentation setting {name!r}; choose from {', '.join(settings)}")
    return AugmentSpec(seed=seed, **settings[name])


AUGMENTATION_SETTINGS: Tuple[str, ...] = ("none", "crop", "hflip", "cutout", "mosaic", "all")


def _window(array: np.ndarray, top: int, left: int, height: int, width: int) -> np.ndarray:
    return np.ascontiguousarray(array[top : top + height, left : left + width])


def _airlight_window(pair: HazePair, top: int, left: int, height: int, width: int) -> np.ndarray:
    airlight = np.asarray(pair.airlight)
    if airlight.ndim == 1:
        return airlight
    return _window(airlight, top, left, height, width)


def crop_pair(pair: HazePair, top: int, left: int, height: int, width: int) -> HazePair:
    src_h, src_w = pair.extent
    if height > src_h or width > src_w:
        raise ParameterError(f"crop {height}x{width} exceeds the {src_h}x{src_w} source")
    if not (0 <= top <= src_h - height and 0 <= left <= src_w - width):
        raise ParameterError(f"crop window at ({top}, {left}) leaves the {src_h}x{src_w} source")
    return HazePair(
        hazy=_window(pair.hazy, top, left, height, width),
        clean=_window(pair.clean, top, left, height, width),
        t_true=_window(pair.t_true, top, left, height, width),
        t_dcp=_window(pair.t_dcp, top, left, height, width),
        airlight=_airlight_window(pair, top, left, height, width),
    )


def _flip(array: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(array[:, ::-1])


def hflip_pair(pair: HazePair) -> HazePair:
    airlight = np.asarray(pair.airlight)
    return HazePair(
        hazy=_flip(pair.hazy),
        clean=_flip(pair.clean),
        t_true=_flip(pair.t_true),
        t_dcp=_flip(pair.t_dcp),
        airlight=airlight if airlight.ndim == 1 else _flip(airlight),
    )


def cutout_pair(pair: HazePair, spec: CutoutSpec, rng: np.random.Generator) -> HazePair:
    """Zero rectangles in the network inputs (hazy and t_dcp); targets stay intact."""
    height, width = pair.extent
    scale = math.sqrt(spec.max_fraction)
    max_h, max_w = max(1, int(scale * height)), max(1, int(scale * width))
    hazy, t_dcp = pair.hazy.copy(), pair.t_dcp.copy()
    for _ in range(spec.count):
        rect_h = int(rng.integers(1, max_h + 1))
        rect_w = int(rng.integers(1, max_w + 1))
        top = int(rng.integers(0, height - rect_h + 1))
        left = int(rng.integers(0, width - rect_w + 1))
        hazy[top : top + rect_h, left : left + rect_w] = 0.0
        t_dcp[top : top + rect_h, left : left + rect_w] = 0.0
    return pair.replace(hazy=hazy, t_dcp=t_dcp)


def augment(pair: HazePair, spec: AugmentSpec, rng: np.random.Generator) -> HazePair:
    """Random crop, horizontal flip and cutout, in that order."""
    if spec.crop is not None:
        src_h, src_w = pair.extent
        if spec.crop > min(src_h, src_w):
            raise ParameterError(f"crop {spec.crop} exceeds the {src_h}x{src_w} source")
        top = int(rng.integers(0, src_h - spec.crop + 1))
        left = int(rng.integers(0, src_w - spec.crop + 1))
        pair = crop_pair(pair, top, left, spec.crop, spec.crop)
    if spec.hflip_prob > 0 and rng.random() < spec.hflip_prob:
        pair = hflip_pair(pair)
    if spec.cutout is not None:
        pair = cutout_pair(pair, spec.cutout, rng)
    return pair


def _broadcast_airlight(pair: HazePair, height: int, width: int) -> np.ndarray:
    airlight = np.asarray(pair.airlight, dtype=np.float64)
    return np.broadcast_to(airlight, (height, width, 3)) if airlight.ndim == 1 else airlight


def mosaic4(
    pairs: Sequence[HazePair],
    target: Extent,
    rng: np.random.Generator,
    center: Optional[Tuple[int, int]] = None,
) -> HazePair:
    """Tile four pairs around a random center; quadrant order is TL, TR, BL, BR."""
    if len(pairs) != 4:
        raise DimensionError("mosaic needs four pairs", axis="count", expected=4, actual=len(pairs))
    height, width = as_extent(target)
    for pair in pairs:
        if pair.extent[0] < height or pair.extent[1] < width:
            raise ParameterError(f"mosaic source {pair.extent} is smaller than the {height}x{width} target")

    if center is None:
        cy = int(rng.integers(height // 4, 3 * height // 4 + 1))
        cx = int(rng.integers(width // 4, 3 * width // 4 + 1))
    else:
        cy, cx = center
    if not (0 < cy < height and 0 < cx < width):
        raise ParameterError(f"mosaic center ({cy}, {cx}) outside the {height}x{width} target")

    out = {
        "hazy": np.zeros((height, width, 3), dtype=np.float32),
        "clean": np.zeros((height, width, 3), dtype=np.float32),
        "t_true": np.zeros((height, width), dtype=np.float32),
        "t_dcp": np.zeros((height, width), dtype=np.float32),
        "airlight": np.zeros((height, width, 3), dtype=np.float64),
    }
    quadrants = (
        (slice(0, cy), slice(0, cx)),
        (slice(0, cy), slice(cx, width)),
        (slice(cy, height), slice(0, cx)),
        (slice(cy, height), slice(cx, width)),
    )
    for pair, (rows, cols) in zip(pairs, quadrants):
        quad_h, quad_w = rows.stop - rows.start, cols.stop - cols.start
        src_h, src_w = pair.extent
        top = int(rng.integers(0, src_h - quad_h + 1))
        left = int(rng.integers(0, src_w - quad_w + 1))
        source = crop_pair(pair.replace(airlight=_broadcast_airlight(pair, src_h, src_w)), top, left, quad_h, quad_w)
        for name, array in out.items():
            array[rows, cols] = getattr(source, name)

    return HazePair(**out)
