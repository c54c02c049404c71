from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence

import pydantic

from dehazer.exceptions import DimensionError
from dehazer.types import BaseModel, ImageRGB

from ._quality import psnr, ssim

__all__ = ["Scores", "MetricsRecord", "score_images"]


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _fill_means(cls, values: dict) -> dict:
    psnr_list, ssim_list = values.get("psnr"), values.get("ssim")
    if not psnr_list or not ssim_list:
        raise ValueError("per-image psnr and ssim lists must be non-empty")
    if len(psnr_list) != len(ssim_list):
        raise ValueError("psnr and ssim lists differ in length")
    for field, source in (("mean_psnr", psnr_list), ("mean_ssim", ssim_list)):
        expected = _mean(source)
        given = values.get(field)
        if given is None:
            values[field] = expected
        elif not math.isclose(given, expected, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(f"{field}={given} is not the mean of its list ({expected})")
    return values


class Scores(BaseModel):
    """Per-image PSNR/SSIM and their means."""

    psnr: List[float]
    ssim: List[float]
    mean_psnr: Optional[float] = None
    mean_ssim: Optional[float] = None

    _means = pydantic.root_validator(skip_on_failure=True, allow_reuse=True)(_fill_means)


class MetricsRecord(BaseModel):
    config_name: str
    dataset_tag: str
    psnr: List[float]
    ssim: List[float]
    mean_psnr: Optional[float] = None
    mean_ssim: Optional[float] = None
    # comparison rows scored against the same targets, e.g. "hazy" and "dcp"
    baselines: Dict[str, Scores] = {}

    _means = pydantic.root_validator(skip_on_failure=True, allow_reuse=True)(_fill_means)

    @classmethod
    def from_scores(
        cls,
        config_name: str,
        dataset_tag: str,
        scores: Scores,
        baselines: Optional[Dict[str, Scores]] = None,
    ) -> MetricsRecord:
        return cls(
            config_name=config_name,
            dataset_tag=dataset_tag,
            psnr=scores.psnr,
            ssim=scores.ssim,
            baselines=baselines or {},
        )

    @property
    def scores(self) -> Scores:
        return Scores(psnr=self.psnr, ssim=self.ssim)

    def gain_over(self, baseline: str) -> float:
        """Mean PSNR improvement in dB over a named baseline."""
        return self.mean_psnr - self.baselines[baseline].mean_psnr  # type: ignore[operator]


def score_images(predictions: Sequence[ImageRGB], targets: Sequence[ImageRGB]) -> Scores:
    if len(predictions) != len(targets):
        raise DimensionError(
            "prediction and target counts differ", axis="count", expected=len(targets), actual=len(predictions)
        )
    return Scores(
        psnr=[psnr(pred, target) for pred, target in zip(predictions, targets)],
        ssim=[ssim(pred, target) for pred, target in zip(predictions, targets)],
    )
