from __future__ import annotations

from typing import Tuple

import numpy as np
import pydantic

from dehazer import GlobalConfiguration
from dehazer.constants import AIRLIGHT_FLOOR
from dehazer.types import BaseModel

__all__ = ["DcpParams", "AtmosphericLight"]


class DcpParams(BaseModel):
    patch: int = 15
    omega: float = 0.95
    t_floor: float = 0.1
    bright_fraction: float = 0.001
    guided_radius: int = pydantic.Field(
        default_factory=lambda: GlobalConfiguration.defaults().guided_radius
    )
    guided_eps: float = 1e-3

    @pydantic.validator("patch")
    def _odd_patch(cls, value: int) -> int:
        if value < 1 or value % 2 == 0:
            raise ValueError("patch must be an odd integer >= 1")
        return value

    @pydantic.validator("omega")
    def _omega_range(cls, value: float) -> float:
        if not 0.0 < value <= 1.0:
            raise ValueError("omega must be in (0, 1]")
        return value

    @pydantic.validator("t_floor")
    def _t_floor_range(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("t_floor must be in (0, 1)")
        return value

    @pydantic.validator("bright_fraction")
    def _bright_fraction_range(cls, value: float) -> float:
        if not 0.0 < value <= 1.0:
            raise ValueError("bright_fraction must be in (0, 1]")
        return value

    @pydantic.validator("guided_radius")
    def _radius_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("guided_radius must be >= 1")
        return value

    @pydantic.validator("guided_eps")
    def _eps_positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("guided_eps must be > 0")
        return value


class AtmosphericLight(BaseModel):
    rgb: Tuple[float, float, float]

    @pydantic.validator("rgb")
    def _strictly_positive(cls, value: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if any(not 0.0 < component <= 1.0 for component in value):
            raise ValueError("atmospheric light components must be in (0, 1]")
        return value

    @classmethod
    def from_array(cls, values: np.ndarray, floor: float = AIRLIGHT_FLOOR) -> AtmosphericLight:
        clipped = np.clip(np.asarray(values, dtype=np.float64), floor, 1.0)
        return cls(rgb=(float(clipped[0]), float(clipped[1]), float(clipped[2])))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.rgb, dtype=np.float64)
