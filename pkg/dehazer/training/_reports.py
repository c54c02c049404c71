from __future__ import annotations

from pathlib import Path
from typing import Union

from dehazer.types import BaseModel
from dehazer.utils.logging import logger

__all__ = ["write_report"]


def write_report(report: BaseModel, path: Union[str, Path]) -> Path:
    """Write ``report`` as indented JSON in declaration order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.json(indent=2) + "\n", encoding="utf-8")
    logger.info("wrote %s to %s", type(report).__name__, path)
    return path
