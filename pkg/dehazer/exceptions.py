from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

__all__ = [
    "BaseError",
    "UsageError",
    "DataError",
    "DimensionError",
    "ParameterError",
    "ConfigurationError",
    "ConfigMismatchError",
    "ImageFormatError",
    "ImageHeaderError",
    "ImagePayloadError",
    "ImageDepthError",
    "CheckpointFormatError",
    "NumericalError",
    "TrainingAborted",
    "GradcheckFailure",
]


class BaseError(Exception):
    code = "E_DEHAZER"
    exit_code = 1


class UsageError(BaseError):
    code = "E_USAGE"
    exit_code = 1


class DataError(BaseError):
    code = "E_DATA"
    exit_code = 2


class DimensionError(DataError):
    code = "E_DIMENSION"

    def __init__(
        self,
        message: str,
        *,
        axis: Optional[str] = None,
        expected: Any = None,
        actual: Any = None,
    ) -> None:
        self.axis = axis
        self.expected = expected
        self.actual = actual
        if axis is not None:
            message = f"{message} (axis={axis}, expected={expected}, actual={actual})"
        super().__init__(message)


class ParameterError(DataError):
    code = "E_PARAMETER"


class ConfigurationError(DataError):
    code = "E_CONFIG"


class ConfigMismatchError(ConfigurationError):
    code = "E_CONFIG_MISMATCH"


class ImageFormatError(DataError):
    code = "E_IMAGE"


class ImageHeaderError(ImageFormatError):
    code = "E_IMAGE_HEADER"


class ImagePayloadError(ImageFormatError):
    code = "E_IMAGE_PAYLOAD"


class ImageDepthError(ImageFormatError):
    code = "E_IMAGE_DEPTH"


class CheckpointFormatError(DataError):
    code = "E_CHECKPOINT"


class NumericalError(BaseError):
    code = "E_NUMERICAL"
    exit_code = 3


class TrainingAborted(NumericalError):
    code = "E_TRAINING_ABORTED"

    def __init__(self, message: str, *, iteration: int, checkpoint: Optional[Path] = None):
        self.iteration = iteration
        self.checkpoint = checkpoint
        super().__init__(message)


class GradcheckFailure(NumericalError):
    code = "E_GRADCHECK"
