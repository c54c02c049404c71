from typing import Literal

from .types import ValueClass, ScaleDefaults

__all__ = ["ValueClass", "GlobalConfiguration"]


class GlobalConfiguration(metaclass=ValueClass):
    SCALE: Literal["toy", "full"] = "toy"

    _SCALE_DEFAULTS = {
        "toy": ScaleDefaults(base_width=16, depth=3, guided_radius=8),
        "full": ScaleDefaults(base_width=64, depth=4, guided_radius=40),
    }

    @classmethod
    def defaults(cls) -> ScaleDefaults:
        try:
            return cls._SCALE_DEFAULTS[cls.SCALE]
        except KeyError:
            raise ValueError(f"unknown scale: {cls.SCALE!r}") from None
