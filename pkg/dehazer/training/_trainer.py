from __future__ import annotations

import dataclasses
import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from dehazer.data import AugmentSpec, Dataset, HazePair, augment, mosaic4
from dehazer.exceptions import ConfigurationError, NumericalError, TrainingAborted
from dehazer.metrics import (
    MetricsRecord,
    discriminator_loss,
    generator_adversarial_loss,
    generator_total_loss,
    reconstruction_loss,
)
from dehazer.model import (
    DiscriminatorGraph,
    GeneratorGraph,
    Module,
    NetworkConfig,
    build_discriminator,
    build_generator,
)
from dehazer.tensor import Tensor, adam_step, concat_channels, slice_channels
from dehazer.utils.logging import logger

from ._checkpoint import save_checkpoint
from ._evaluate import assemble_input, assemble_target, config_label, evaluate
from ._plan import TrainPlan, TrainReport

__all__ = ["train", "train_models", "TrainResult", "discriminator_input"]


PathLike = Union[str, Path]


@dataclasses.dataclass(frozen=True, kw_only=True)
class TrainResult:
    report: TrainReport
    generator: GeneratorGraph
    discriminator: Optional[DiscriminatorGraph]


def discriminator_input(candidate: Tensor, generator_input: Tensor, cfg: NetworkConfig) -> Tensor:
    """Candidate RGB plus the guidance the discriminator is configured to see."""
    if cfg.conditional_discriminator:
        return concat_channels(candidate, generator_input)
    if cfg.input_channels == 4:
        return concat_channels(candidate, slice_channels(generator_input, 3, 4))
    return candidate


def _training_extent(train: Sequence[HazePair], aug: AugmentSpec) -> Tuple[int, int]:
    extents = {pair.extent for pair in train}
    if len(extents) != 1:
        raise ConfigurationError(f"training pairs disagree on extent: {sorted(extents)}")
    (extent,) = extents
    if aug.crop is not None:
        return aug.crop, aug.crop
    return extent


def _sample_batch(
    train: Sequence[HazePair],
    plan: TrainPlan,
    draw: np.random.Generator,
    aug_draw: np.random.Generator,
) -> List[HazePair]:
    batch = []
    for _ in range(plan.batch):
        if plan.aug.mosaic_prob > 0 and aug_draw.random() < plan.aug.mosaic_prob:
            picks = draw.integers(0, len(train), size=4)
            pair = mosaic4([train[i] for i in picks], train[0].extent, aug_draw)
        else:
            pair = train[int(draw.integers(0, len(train)))]
        batch.append(augment(pair, plan.aug, aug_draw))
    return batch


@dataclasses.dataclass(frozen=True)
class _ParamState:
    data: np.ndarray
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int


def _snapshot(modules: Sequence[Module]) -> List[Dict[str, _ParamState]]:
    """Parameter values together with their Adam buffers."""
    return [
        {
            name: _ParamState(
                data=param.data.copy(),
                first_moment=param.first_moment.copy(),
                second_moment=param.second_moment.copy(),
                step_count=param.step_count,
            )
            for name, param in module.named_parameters()
        }
        for module in modules
    ]


def _restore_snapshot(modules: Sequence[Module], snapshot: List[Dict[str, _ParamState]]) -> None:
    for module, stored in zip(modules, snapshot):
        for name, param in module.named_parameters():
            state = stored[name]
            param.data = state.data
            param.first_moment = state.first_moment
            param.second_moment = state.second_moment
            param.step_count = state.step_count


def _step(module: Module, lr: float, plan: TrainPlan) -> None:
    beta1, beta2 = plan.betas
    for param in module.parameters():
        grad = param.grad if param.grad is not None else np.zeros_like(param.data)
        adam_step(param, grad, lr=lr, beta1=beta1, beta2=beta2, eps=plan.eps)


def _finite(value: float) -> bool:
    return math.isfinite(value)


def train_models(
    plan: TrainPlan,
    data: Union[Dataset, Sequence[HazePair]],
    *,
    checkpoint: Optional[PathLike] = None,
    val: Optional[Sequence[HazePair]] = None,
) -> TrainResult:
    """Alternate one generator and (generative core only) one discriminator step per iteration.

    The run is a pure function of ``plan`` and ``data``. A non-finite loss restores the
    parameters of the last finished iteration, writes them to ``checkpoint`` and raises
    ``TrainingAborted``.
    """
    if isinstance(data, Dataset):
        train_pairs: Sequence[HazePair] = data.train
        val = data.val if val is None else val
    else:
        train_pairs = data
    if not train_pairs:
        raise ConfigurationError("training needs at least one pair")

    cfg = plan.config
    cfg.validate_extent(*_training_extent(train_pairs, plan.aug))

    gen_seed, disc_seed, draw_seed = np.random.SeedSequence(plan.seed).spawn(3)
    generator = build_generator(cfg, gen_seed)
    discriminator = build_discriminator(cfg, disc_seed) if cfg.is_generative else None
    modules: List[Module] = [generator] if discriminator is None else [generator, discriminator]
    draw = np.random.default_rng(draw_seed)
    aug_draw = np.random.default_rng([plan.aug.seed, plan.seed])

    label = config_label(cfg)
    rec_trace: List[float] = []
    adv_trace: List[float] = []
    d_trace: List[float] = []
    evaluations: List[MetricsRecord] = []
    started = time.perf_counter()
    logger.info(
        "training %s for %d iterations (batch %d, %d pairs, seed %d)",
        label,
        plan.iterations,
        plan.batch,
        len(train_pairs),
        plan.seed,
    )

    for iteration in range(1, plan.iterations + 1):
        last_good = _snapshot(modules)
        batch = _sample_batch(train_pairs, plan, draw, aug_draw)
        x = assemble_input(batch, cfg)
        target = assemble_target(batch)
        try:
            fake = generator(x)
            rec = reconstruction_loss(fake, target)
            adv = None
            if discriminator is not None:
                adv = generator_adversarial_loss(discriminator(discriminator_input(fake, x, cfg)))
            total = generator_total_loss(adv, rec, plan.weights)
            if not _finite(total.item()):
                raise NumericalError(f"non-finite generator loss {total.item()}")
            for module in modules:
                module.zero_grad()
            total.backward()
            _step(generator, plan.lr_g, plan)

            loss_d = 0.0
            if discriminator is not None:
                settled = fake.detach()
                d_real = discriminator(discriminator_input(target, x, cfg))
                d_fake = discriminator(discriminator_input(settled, x, cfg))
                d_loss = discriminator_loss(d_real, d_fake)
                loss_d = d_loss.item()
                if not _finite(loss_d):
                    raise NumericalError(f"non-finite discriminator loss {loss_d}")
                discriminator.zero_grad()
                d_loss.backward()
                _step(discriminator, plan.lr_d, plan)
        except NumericalError as e:
            _restore_snapshot(modules, last_good)
            kept = save_checkpoint(checkpoint, generator, discriminator) if checkpoint is not None else None
            logger.error("training %s aborted at iteration %d: %s", label, iteration, e)
            raise TrainingAborted(
                f"{e} at iteration {iteration}; parameters of iteration {iteration - 1} retained",
                iteration=iteration,
                checkpoint=kept,
            ) from e

        rec_trace.append(rec.item())
        adv_trace.append(0.0 if adv is None else adv.item())
        d_trace.append(loss_d)
        logger.debug(
            "%s iteration %d: rec %.5f adv %.5f d %.5f",
            label,
            iteration,
            rec_trace[-1],
            adv_trace[-1],
            d_trace[-1],
        )

        if plan.eval_every and val and iteration % plan.eval_every == 0:
            evaluations.append(evaluate(generator, val, dataset_tag=f"val@{iteration}", baselines=False))

    wall_time = time.perf_counter() - started
    kept_path = save_checkpoint(checkpoint, generator, discriminator) if checkpoint is not None else None
    logger.info("trained %s in %.1f s; final rec loss %.5f", label, wall_time, rec_trace[-1])
    report = TrainReport(
        config_name=label,
        iterations=plan.iterations,
        rec_trace=rec_trace,
        adv_trace=adv_trace,
        d_trace=d_trace,
        evaluations=evaluations,
        checkpoint=None if kept_path is None else str(kept_path),
        wall_time=wall_time,
    )
    return TrainResult(report=report, generator=generator, discriminator=discriminator)


def train(
    plan: TrainPlan,
    data: Union[Dataset, Sequence[HazePair]],
    *,
    checkpoint: Optional[PathLike] = None,
    val: Optional[Sequence[HazePair]] = None,
) -> TrainReport:
    return train_models(plan, data, checkpoint=checkpoint, val=val).report
