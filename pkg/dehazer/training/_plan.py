from __future__ import annotations

from typing import List, Optional, Tuple

import pydantic

from dehazer.data import AugmentSpec
from dehazer.metrics import LossWeights, MetricsRecord
from dehazer.model import NetworkConfig
from dehazer.types import BaseModel

__all__ = ["TrainPlan", "TrainReport"]


class TrainPlan(BaseModel):
    config: NetworkConfig = pydantic.Field(default_factory=NetworkConfig)
    weights: LossWeights = LossWeights()
    aug: AugmentSpec = AugmentSpec()
    lr_g: float = 1e-4
    # ignored for the segmentation core
    lr_d: float = 1e-4
    betas: Tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    batch: int = 2
    iterations: int = 200
    seed: int = 0
    eval_every: int = 0

    @pydantic.validator("batch", "iterations")
    def _at_least_one(cls, value: int, field: pydantic.fields.ModelField) -> int:
        if value < 1:
            raise ValueError(f"{field.name} must be >= 1")
        return value

    @pydantic.validator("lr_g", "lr_d", "eps")
    def _positive(cls, value: float, field: pydantic.fields.ModelField) -> float:
        if value <= 0:
            raise ValueError(f"{field.name} must be > 0")
        return value

    @pydantic.validator("betas")
    def _betas_in_unit_interval(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if not all(0.0 <= beta < 1.0 for beta in value):
            raise ValueError("betas must be in [0, 1)")
        return value

    @pydantic.validator("eval_every")
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("eval_every must be >= 0 (0 disables periodic evaluation)")
        return value


class TrainReport(BaseModel):
    config_name: str
    iterations: int
    rec_trace: List[float]
    adv_trace: List[float]
    d_trace: List[float]
    evaluations: List[MetricsRecord] = []
    checkpoint: Optional[str] = None
    # measured but never serialized, so reruns write identical reports
    wall_time: float = pydantic.Field(0.0, exclude=True)

    @pydantic.root_validator(skip_on_failure=True)
    def _trace_lengths(cls, values):
        for name in ("rec_trace", "adv_trace", "d_trace"):
            if len(values[name]) != values["iterations"]:
                raise ValueError(f"{name} has {len(values[name])} entries for {values['iterations']} iterations")
        return values
