from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import pydantic

from dehazer.exceptions import ConfigurationError, DataError, DimensionError
from dehazer.prior import AtmosphericLight, DcpParams, dcp_dehaze
from dehazer.types import BaseModel, ImageRGB, TransmissionMap
from dehazer.utils.logging import logger

from ._io import load_image, load_map, save_image, save_map
from ._synthesis import (
    Extent,
    as_extent,
    procedural_scene,
    random_airlight,
    random_transmission_field,
    synthesize_haze,
)

__all__ = [
    "HazePair",
    "Dataset",
    "DatasetManifest",
    "make_pair",
    "make_dataset",
    "write_dataset",
    "read_dataset",
    "MANIFEST_NAME",
]


MANIFEST_NAME = "manifest.json"
SPLITS = ("train", "val")


@dataclasses.dataclass(frozen=True, kw_only=True)
class HazePair:
    """Aligned hazy/clean images with the true and the DCP-estimated transmission.

    ``airlight`` is a 3-vector, or an H x W x 3 map once pairs are mosaicked.
    """

    hazy: ImageRGB
    clean: ImageRGB
    t_true: TransmissionMap
    t_dcp: TransmissionMap
    airlight: np.ndarray

    def __post_init__(self) -> None:
        extent = self.hazy.shape[:2]
        for name in ("clean", "t_true", "t_dcp"):
            actual = getattr(self, name).shape[:2]
            if actual != extent:
                raise DimensionError(f"HazePair.{name} extent differs from hazy", axis="extent", expected=extent, actual=actual)

    @property
    def extent(self) -> Tuple[int, int]:
        return self.hazy.shape[0], self.hazy.shape[1]

    def haze_model_error(self) -> float:
        """Max deviation of ``hazy`` from ``clean * t_true + A * (1 - t_true)``."""
        t = self.t_true.astype(np.float64)[..., None]
        expected = self.clean.astype(np.float64) * t + np.asarray(self.airlight, dtype=np.float64) * (1.0 - t)
        return float(np.max(np.abs(self.hazy.astype(np.float64) - expected)))

    def replace(self, **changes: np.ndarray) -> HazePair:
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True, kw_only=True)
class Dataset:
    train: Tuple[HazePair, ...]
    val: Tuple[HazePair, ...]
    seed: int
    extent: Tuple[int, int]
    dcp: DcpParams

    def split(self, name: str) -> Tuple[HazePair, ...]:
        if name not in SPLITS:
            raise ConfigurationError(f"unknown split {name!r}")
        return getattr(self, name)

    def __iter__(self) -> Iterator[HazePair]:
        yield from self.train
        yield from self.val


def make_pair(
    clean: ImageRGB,
    t_true: TransmissionMap,
    airlight: AtmosphericLight,
    dcp: Optional[DcpParams] = None,
) -> HazePair:
    hazy = synthesize_haze(clean, t_true, airlight)
    _, t_dcp = dcp_dehaze(hazy, dcp)
    return HazePair(
        hazy=hazy,
        clean=np.asarray(clean, dtype=np.float32),
        t_true=np.asarray(t_true, dtype=np.float32),
        t_dcp=t_dcp,
        airlight=airlight.as_array(),
    )


def _synthetic_pair(
    extent: Tuple[int, int],
    seed: np.random.SeedSequence,
    beta_range: Tuple[float, float],
    dcp: DcpParams,
) -> HazePair:
    scene_seed, field_seed, light_seed = seed.spawn(3)
    clean = procedural_scene(extent, scene_seed)
    t_true = random_transmission_field(extent, beta_range, field_seed)
    return make_pair(clean, t_true, random_airlight(light_seed), dcp)


def make_dataset(
    n_train: int,
    n_val: int,
    extent: Extent,
    seed: int = 0,
    *,
    beta_range: Tuple[float, float] = (0.5, 1.5),
    dcp: Optional[DcpParams] = None,
) -> Dataset:
    """Seeded synthetic train/val pairs; a pure function of its arguments."""
    if n_train < 0 or n_val < 0 or n_train + n_val == 0:
        raise ConfigurationError(f"dataset needs at least one pair, got train={n_train} val={n_val}")
    extent = as_extent(extent)
    dcp = dcp or DcpParams()
    seeds = np.random.SeedSequence(seed).spawn(n_train + n_val)
    pairs = [_synthetic_pair(extent, child, beta_range, dcp) for child in seeds]
    logger.info("synthesized %d train / %d val pairs at %dx%d (seed %d)", n_train, n_val, *extent, seed)
    return Dataset(
        train=tuple(pairs[:n_train]),
        val=tuple(pairs[n_train:]),
        seed=seed,
        extent=extent,
        dcp=dcp,
    )


class DatasetManifest(BaseModel):
    seed: int
    extent: Tuple[int, int]
    dcp: DcpParams
    airlight: Dict[str, List[Tuple[float, float, float]]]

    def count(self, split: str) -> int:
        return len(self.airlight.get(split, []))


def _pair_paths(root: Path, split: str, index: int) -> Dict[str, Path]:
    stem = root / split / f"{index:04d}"
    return {kind: stem.with_name(f"{stem.name}_{kind}.ppm") for kind in ("hazy", "clean", "t")}


def write_dataset(root: Union[str, Path], dataset: Dataset) -> DatasetManifest:
    """Write ``<root>/{train,val}/NNNN_{hazy,clean,t}.ppm`` plus the manifest."""
    root = Path(root)
    airlight: Dict[str, List[Tuple[float, float, float]]] = {}
    for split in SPLITS:
        (root / split).mkdir(parents=True, exist_ok=True)
        lights = []
        for index, pair in enumerate(dataset.split(split)):
            if np.asarray(pair.airlight).shape != (3,):
                raise DataError("only pairs with a global atmospheric light can be written")
            paths = _pair_paths(root, split, index)
            save_image(pair.hazy, paths["hazy"])
            save_image(pair.clean, paths["clean"])
            save_map(pair.t_true, paths["t"])
            lights.append(tuple(float(v) for v in pair.airlight))
        airlight[split] = lights

    manifest = DatasetManifest(seed=dataset.seed, extent=dataset.extent, dcp=dataset.dcp, airlight=airlight)
    (root / MANIFEST_NAME).write_text(manifest.json(indent=2) + "\n", encoding="utf-8")
    logger.info("wrote dataset to %s", root)
    return manifest


def read_manifest(root: Union[str, Path]) -> DatasetManifest:
    path = Path(root) / MANIFEST_NAME
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DataError(f"cannot read dataset manifest {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"malformed dataset manifest {path}: {e}") from e
    try:
        return DatasetManifest.parse_obj(raw)
    except pydantic.ValidationError as e:
        raise DataError(f"invalid dataset manifest {path}: {e}") from e


def read_dataset(root: Union[str, Path]) -> Dataset:
    """Load a written dataset; ``t_dcp`` is re-estimated from the stored hazy images."""
    root = Path(root)
    manifest = read_manifest(root)
    splits: Dict[str, Tuple[HazePair, ...]] = {}
    for split in SPLITS:
        pairs = []
        for index, light in enumerate(manifest.airlight.get(split, [])):
            paths = _pair_paths(root, split, index)
            hazy = load_image(paths["hazy"])
            _, t_dcp = dcp_dehaze(hazy, manifest.dcp)
            pairs.append(
                HazePair(
                    hazy=hazy,
                    clean=load_image(paths["clean"]),
                    t_true=load_map(paths["t"]),
                    t_dcp=t_dcp,
                    airlight=np.asarray(light, dtype=np.float64),
                )
            )
        splits[split] = tuple(pairs)
    return Dataset(
        train=splits["train"],
        val=splits["val"],
        seed=manifest.seed,
        extent=manifest.extent,
        dcp=manifest.dcp,
    )
