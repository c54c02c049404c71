from __future__ import annotations

from pathlib import Path
from typing import Tuple, Union

import numpy as np

from dehazer.exceptions import (
    DimensionError,
    ImageDepthError,
    ImageFormatError,
    ImageHeaderError,
    ImagePayloadError,
)
from dehazer.types import ImageRGB, TransmissionMap

__all__ = [
    "load_image",
    "save_image",
    "load_map",
    "save_map",
    "decode_ppm",
    "encode_ppm",
]


PathLike = Union[str, Path]

_WHITESPACE = b" \t\r\n\v\f"


def _next_token(data: bytes, pos: int) -> Tuple[bytes, int]:
    while pos < len(data):
        if data[pos] in _WHITESPACE:
            pos += 1
        elif data[pos : pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, name: str) -> Tuple[int, int]:
    token, pos = _next_token(data, pos)
    if not token.isdigit():
        raise ImageHeaderError(f"PPM header: expected {name}, got {token[:16]!r}")
    return int(token), pos


def decode_ppm(data: bytes) -> ImageRGB:
    """Decode a binary (P6) PPM into an H x W x 3 float32 array in [0, 1]."""
    if data[:2] != b"P6":
        raise ImageHeaderError(f"not a binary PPM: magic {data[:2]!r}")
    width, pos = _header_int(data, 2, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise ImageHeaderError(f"PPM header: empty image {width}x{height}")
    if maxval < 1:
        raise ImageHeaderError(f"PPM header: maxval {maxval}")
    if maxval > 255:
        raise ImageDepthError(f"only 8-bit PPM is supported, maxval {maxval}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise ImageHeaderError("PPM header is not terminated by whitespace")
    pos += 1

    expected = width * height * 3
    payload = data[pos : pos + expected]
    if len(payload) < expected:
        raise ImagePayloadError(f"PPM payload truncated: {len(payload)} of {expected} bytes")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return (pixels.astype(np.float32) / np.float32(maxval)).astype(np.float32)


def _quantize(img: np.ndarray) -> np.ndarray:
    return np.round(np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)


def encode_ppm(img: ImageRGB) -> bytes:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise DimensionError("expected an H x W x 3 image", axis="channels", expected=3, actual=img.shape)
    height, width = img.shape[:2]
    return b"P6\n%d %d\n255\n" % (width, height) + _quantize(img).tobytes()


def _load_png(path: Path) -> ImageRGB:
    try:
        from PIL import Image
    except ImportError:
        raise ImageFormatError("PNG support needs Pillow (install the 'png' extra)") from None

    try:
        with Image.open(path) as handle:
            if handle.mode in ("I", "I;16", "I;16B", "I;16L", "F"):
                raise ImageDepthError(f"only 8-bit PNG is supported, got mode {handle.mode}")
            pixels = np.asarray(handle.convert("RGB"), dtype=np.uint8)
    except OSError as e:
        raise ImagePayloadError(f"cannot decode {path}: {e}") from e
    return pixels.astype(np.float32) / np.float32(255.0)


def _save_png(img: ImageRGB, path: Path) -> None:
    try:
        from PIL import Image
    except ImportError:
        raise ImageFormatError("PNG support needs Pillow (install the 'png' extra)") from None
    Image.fromarray(_quantize(img), mode="RGB").save(path)


def load_image(path: PathLike) -> ImageRGB:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        return _load_png(path)
    if suffix not in (".ppm", ".pnm"):
        raise ImageFormatError(f"unsupported image format: {path.name}")
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ImageFormatError(f"cannot read {path}: {e}") from e
    return decode_ppm(data)


def save_image(img: ImageRGB, path: PathLike) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        _save_png(img, path)
    elif suffix in (".ppm", ".pnm"):
        path.write_bytes(encode_ppm(img))
    else:
        raise ImageFormatError(f"unsupported image format: {path.name}")


def save_map(t: TransmissionMap, path: PathLike) -> None:
    """Store a single-channel map as a gray image."""
    t = np.asarray(t)
    if t.ndim == 3 and t.shape[2] == 1:
        t = t[..., 0]
    if t.ndim != 2:
        raise DimensionError("expected an H x W map", axis="rank", expected=2, actual=t.ndim)
    save_image(np.repeat(t[..., None], 3, axis=2), path)


def load_map(path: PathLike) -> TransmissionMap:
    return load_image(path).mean(axis=2, dtype=np.float64).astype(np.float32)
