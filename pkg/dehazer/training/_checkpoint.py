"""Self-describing binary checkpoints.

Layout, little-endian::

    magic        8 bytes  b"DHZCKPT\\0"
    version      u16
    config_len   u32, then config_len bytes of UTF-8 JSON (the NetworkConfig echo)
    count        u32, then per tensor:
        name_len u16, name_len bytes of UTF-8 name
        ndim     u8, then ndim x u32 extents
        data     float32 values, row-major
"""
from __future__ import annotations

import dataclasses
import io
import json
import struct
from pathlib import Path
from typing import BinaryIO, Dict, Optional, Union

import numpy as np
import pydantic

from dehazer.constants import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from dehazer.exceptions import CheckpointFormatError, ConfigMismatchError
from dehazer.model import (
    DiscriminatorGraph,
    GeneratorGraph,
    Module,
    NetworkConfig,
    build_generator,
)
from dehazer.utils.logging import logger

__all__ = [
    "Checkpoint",
    "save_checkpoint",
    "load_checkpoint",
    "read_checkpoint",
    "restore_generator",
]


PathLike = Union[str, Path]

GENERATOR_PREFIX = "generator."
DISCRIMINATOR_PREFIX = "discriminator."


@dataclasses.dataclass(frozen=True, kw_only=True)
class Checkpoint:
    config: NetworkConfig
    tensors: Dict[str, np.ndarray]

    def section(self, prefix: str) -> Dict[str, np.ndarray]:
        return {name[len(prefix) :]: array for name, array in self.tensors.items() if name.startswith(prefix)}

    @property
    def has_discriminator(self) -> bool:
        return any(name.startswith(DISCRIMINATOR_PREFIX) for name in self.tensors)


def _config_bytes(cfg: NetworkConfig) -> bytes:
    return json.dumps(json.loads(cfg.json()), sort_keys=True, separators=(",", ":")).encode("utf-8")


def _collect(generator: GeneratorGraph, discriminator: Optional[DiscriminatorGraph]) -> Dict[str, np.ndarray]:
    tensors = {f"{GENERATOR_PREFIX}{name}": array for name, array in generator.state_dict().items()}
    if discriminator is not None:
        tensors.update(
            {f"{DISCRIMINATOR_PREFIX}{name}": array for name, array in discriminator.state_dict().items()}
        )
    return tensors


def _write(stream: BinaryIO, cfg: NetworkConfig, tensors: Dict[str, np.ndarray]) -> None:
    config = _config_bytes(cfg)
    stream.write(CHECKPOINT_MAGIC)
    stream.write(struct.pack("<H", CHECKPOINT_VERSION))
    stream.write(struct.pack("<I", len(config)))
    stream.write(config)
    stream.write(struct.pack("<I", len(tensors)))
    for name, array in tensors.items():
        encoded = name.encode("utf-8")
        stream.write(struct.pack("<H", len(encoded)))
        stream.write(encoded)
        stream.write(struct.pack("<B", array.ndim))
        stream.write(struct.pack(f"<{array.ndim}I", *array.shape))
        stream.write(np.ascontiguousarray(array, dtype="<f4").tobytes())


def save_checkpoint(
    path: PathLike,
    generator: GeneratorGraph,
    discriminator: Optional[DiscriminatorGraph] = None,
) -> Path:
    path = Path(path)
    buffer = io.BytesIO()
    _write(buffer, generator.config, _collect(generator, discriminator))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(buffer.getvalue())
    logger.debug("saved checkpoint %s", path)
    return path


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, size: int, what: str) -> bytes:
        chunk = self.data[self.pos : self.pos + size]
        if len(chunk) < size:
            raise CheckpointFormatError(f"checkpoint truncated while reading {what}")
        self.pos += size
        return chunk

    def unpack(self, fmt: str, what: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def read_checkpoint(path: PathLike) -> Checkpoint:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointFormatError(f"cannot read checkpoint {path}: {e}") from e

    reader = _Reader(data)
    if reader.take(len(CHECKPOINT_MAGIC), "magic") != CHECKPOINT_MAGIC:
        raise CheckpointFormatError(f"{path} is not a checkpoint (bad magic bytes)")
    (version,) = reader.unpack("<H", "version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointFormatError(f"unsupported checkpoint version {version}")

    (config_len,) = reader.unpack("<I", "config length")
    try:
        config = NetworkConfig.parse_raw(reader.take(config_len, "config").decode("utf-8"))
    except (UnicodeDecodeError, pydantic.ValidationError) as e:
        raise CheckpointFormatError(f"checkpoint config is unreadable: {e}") from e

    (count,) = reader.unpack("<I", "tensor count")
    tensors: Dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = reader.unpack("<H", "name length")
        try:
            name = reader.take(name_len, "name").decode("utf-8")
        except UnicodeDecodeError as e:
            raise CheckpointFormatError(f"checkpoint tensor name is unreadable: {e}") from e
        (ndim,) = reader.unpack("<B", f"{name} rank")
        shape = reader.unpack(f"<{ndim}I", f"{name} shape")
        size = int(np.prod(shape, dtype=np.int64))
        values = np.frombuffer(reader.take(4 * size, f"{name} data"), dtype="<f4")
        tensors[name] = values.reshape(shape).astype(np.float32)
    if reader.pos != len(data):
        raise CheckpointFormatError(f"{len(data) - reader.pos} trailing bytes after the last tensor")
    return Checkpoint(config=config, tensors=tensors)


def _restore(module: Module, stored: Dict[str, np.ndarray], role: str) -> None:
    params = dict(module.named_parameters())
    if set(params) != set(stored):
        missing = sorted(set(params) - set(stored))
        extra = sorted(set(stored) - set(params))
        raise CheckpointFormatError(f"{role} tensors do not match: missing {missing}, unexpected {extra}")
    for name, param in params.items():
        if stored[name].shape != param.shape:
            raise CheckpointFormatError(
                f"{role}.{name}: stored shape {stored[name].shape} differs from {param.shape}"
            )
        param.data = stored[name].copy()


def load_checkpoint(
    path: PathLike,
    generator: GeneratorGraph,
    discriminator: Optional[DiscriminatorGraph] = None,
) -> Checkpoint:
    """Restore parameters in place after checking the stored config matches the graphs."""
    checkpoint = read_checkpoint(path)
    if checkpoint.config != generator.config:
        stored, expected = checkpoint.config.dict(), generator.config.dict()
        differing = ", ".join(
            f"{field}: {stored[field]!r} != {expected[field]!r}"
            for field in expected
            if stored[field] != expected[field]
        )
        raise ConfigMismatchError(f"checkpoint config differs from the graph ({differing})")
    _restore(generator, checkpoint.section(GENERATOR_PREFIX), "generator")
    if discriminator is not None:
        if not checkpoint.has_discriminator:
            raise ConfigMismatchError("checkpoint holds no discriminator parameters")
        _restore(discriminator, checkpoint.section(DISCRIMINATOR_PREFIX), "discriminator")
    return checkpoint


def restore_generator(path: PathLike) -> GeneratorGraph:
    """Build a generator from the config stored in the checkpoint and load its weights."""
    checkpoint = read_checkpoint(path)
    generator = build_generator(checkpoint.config)
    _restore(generator, checkpoint.section(GENERATOR_PREFIX), "generator")
    return generator

