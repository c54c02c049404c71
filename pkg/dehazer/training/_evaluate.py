from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from dehazer.data import HazePair
from dehazer.exceptions import ConfigurationError
from dehazer.metrics import MetricsRecord, score_images
from dehazer.model import GeneratorGraph, NetworkConfig
from dehazer.prior import DcpParams, dcp_dehaze
from dehazer.tensor import Tensor
from dehazer.types import ImageRGB
from dehazer.utils.logging import logger

from ._checkpoint import restore_generator

__all__ = [
    "assemble_input",
    "assemble_target",
    "to_images",
    "predict",
    "evaluate",
    "config_label",
]


def config_label(cfg: NetworkConfig) -> str:
    return cfg.preset_name or "custom"


def assemble_input(
    pairs: Sequence[HazePair],
    cfg: NetworkConfig,
    *,
    zero_transmission: bool = False,
) -> Tensor:
    """Stack hazy RGB (and t_dcp for 4-channel configs) into an (n, c, h, w) batch."""
    rgb = np.stack([pair.hazy for pair in pairs]).transpose(0, 3, 1, 2)
    if cfg.input_channels == 3:
        return Tensor(np.ascontiguousarray(rgb, dtype=np.float32))
    t = np.stack([pair.t_dcp for pair in pairs])[:, None]
    if zero_transmission:
        t = np.zeros_like(t)
    return Tensor(np.ascontiguousarray(np.concatenate([rgb, t], axis=1), dtype=np.float32))


def assemble_target(pairs: Sequence[HazePair]) -> Tensor:
    clean = np.stack([pair.clean for pair in pairs]).transpose(0, 3, 1, 2)
    return Tensor(np.ascontiguousarray(clean, dtype=np.float32))


def to_images(batch: Tensor) -> List[ImageRGB]:
    return [np.ascontiguousarray(item.transpose(1, 2, 0), dtype=np.float32) for item in batch.data]


def predict(
    generator: GeneratorGraph,
    pairs: Sequence[HazePair],
    *,
    zero_transmission: bool = False,
) -> List[ImageRGB]:
    """Run the generator on each pair; ``zero_transmission`` blanks the guidance channel."""
    outputs: List[ImageRGB] = []
    for pair in pairs:
        x = assemble_input([pair], generator.config, zero_transmission=zero_transmission)
        outputs.extend(to_images(generator(x).detach()))
    return outputs


def evaluate(
    checkpoint: Union[str, Path, GeneratorGraph],
    pairs: Sequence[HazePair],
    *,
    dataset_tag: str = "val",
    baselines: bool = True,
    dcp: Optional[DcpParams] = None,
) -> MetricsRecord:
    """Score generator output against the clean targets.

    With ``baselines`` the record also carries the untouched hazy input and the
    classical dark-channel dehazing as comparison rows.
    """
    if not pairs:
        raise ConfigurationError("evaluation needs at least one pair")
    generator = checkpoint if isinstance(checkpoint, GeneratorGraph) else restore_generator(checkpoint)
    targets = [pair.clean for pair in pairs]

    scores = score_images(predict(generator, pairs), targets)
    rows = {}
    if baselines:
        rows["hazy"] = score_images([pair.hazy for pair in pairs], targets)
        rows["dcp"] = score_images([dcp_dehaze(pair.hazy, dcp)[0] for pair in pairs], targets)

    record = MetricsRecord.from_scores(config_label(generator.config), dataset_tag, scores, rows)
    logger.info(
        "%s on %s: PSNR %.2f dB, SSIM %.4f over %d images",
        record.config_name,
        dataset_tag,
        record.mean_psnr,
        record.mean_ssim,
        len(pairs),
    )
    return record
