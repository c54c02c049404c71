from __future__ import annotations

from typing import List, Optional, Sequence, Union

from dehazer.data import AUGMENTATION_SETTINGS, Dataset, HazePair, augmentation_setting
from dehazer.exceptions import ConfigurationError
from dehazer.model import PRESETS, TABLE_PRESETS, NetworkConfig, preset_config
from dehazer.types import BaseModel
from dehazer.utils.logging import logger

from ._evaluate import evaluate
from ._plan import TrainPlan
from ._trainer import train_models

__all__ = [
    "AblationRow",
    "AblationTable",
    "run_ablation",
    "run_augmentation_ablation",
    "preset_for_plan",
]


class AblationRow(BaseModel):
    name: str
    psnr: float
    ssim: float
    hazy_psnr: float
    hazy_ssim: float


class AblationTable(BaseModel):
    kind: str
    seed: int
    iterations: int
    dataset_tag: str
    rows: List[AblationRow]

    @property
    def names(self) -> List[str]:
        return [row.name for row in self.rows]

    def row(self, name: str) -> AblationRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)

    def format_table(self) -> str:
        width = max(len("configuration"), *(len(name) for name in self.names))
        lines = [f"{'configuration':<{width}}  {'PSNR':>7}  {'SSIM':>6}"]
        lines.extend(f"{row.name:<{width}}  {row.psnr:7.2f}  {row.ssim:6.4f}" for row in self.rows)
        return "\n".join(lines)


def preset_for_plan(name: str, base: NetworkConfig) -> NetworkConfig:
    """The named architecture at the plan's width, depth and pooling kernels."""
    return preset_config(
        name,
        base_width=base.base_width,
        depth=base.depth,
        spp_kernels=base.spp_kernels,
        conditional_discriminator=base.conditional_discriminator,
    )


def _split(data: Union[Dataset, Sequence[HazePair]], val: Optional[Sequence[HazePair]]):
    if isinstance(data, Dataset):
        return data.train, (data.val if val is None else val)
    return data, val


def _row(name: str, plan: TrainPlan, train_pairs, val_pairs) -> AblationRow:
    result = train_models(plan, train_pairs)
    record = evaluate(result.generator, val_pairs)
    hazy = record.baselines["hazy"]
    return AblationRow(
        name=name,
        psnr=record.mean_psnr,
        ssim=record.mean_ssim,
        hazy_psnr=hazy.mean_psnr,
        hazy_ssim=hazy.mean_ssim,
    )


def run_ablation(
    presets: Sequence[str] = TABLE_PRESETS,
    plan: Optional[TrainPlan] = None,
    data: Union[Dataset, Sequence[HazePair], None] = None,
    *,
    val: Optional[Sequence[HazePair]] = None,
) -> AblationTable:
    """Train and evaluate each preset under one shared plan, dataset and seed."""
    plan = plan or TrainPlan()
    unknown = [name for name in presets if name not in PRESETS]
    if unknown:
        raise ConfigurationError(f"unknown preset(s): {', '.join(map(repr, unknown))}")
    if data is None:
        raise ConfigurationError("ablation needs a dataset")
    train_pairs, val_pairs = _split(data, val)
    if not val_pairs:
        raise ConfigurationError("ablation needs validation pairs")

    rows = []
    for name in presets:
        logger.info("ablation: %s", name)
        rows.append(_row(name, plan.replace(config=preset_for_plan(name, plan.config)), train_pairs, val_pairs))
    return AblationTable(
        kind="architecture",
        seed=plan.seed,
        iterations=plan.iterations,
        dataset_tag="val",
        rows=rows,
    )


def run_augmentation_ablation(
    preset: str = "EDN-GTM",
    plan: Optional[TrainPlan] = None,
    data: Union[Dataset, Sequence[HazePair], None] = None,
    *,
    settings: Sequence[str] = AUGMENTATION_SETTINGS,
    val: Optional[Sequence[HazePair]] = None,
) -> AblationTable:
    """Train one preset under each named augmentation setting."""
    plan = plan or TrainPlan()
    if data is None:
        raise ConfigurationError("ablation needs a dataset")
    config = preset_for_plan(preset, plan.config)
    train_pairs, val_pairs = _split(data, val)
    if not train_pairs or not val_pairs:
        raise ConfigurationError("ablation needs training and validation pairs")

    crop = plan.aug.crop
    if crop is None:
        divisor = config.required_divisor
        extent = min(train_pairs[0].extent)
        crop = max(divisor, int(0.75 * extent) // divisor * divisor)

    rows = []
    for setting in settings:
        aug = augmentation_setting(setting, crop, seed=plan.aug.seed)
        logger.info("augmentation ablation: %s with %s", preset, setting)
        rows.append(_row(setting, plan.replace(config=config, aug=aug), train_pairs, val_pairs))
    return AblationTable(
        kind=f"augmentation ({preset})",
        seed=plan.seed,
        iterations=plan.iterations,
        dataset_tag="val",
        rows=rows,
    )
