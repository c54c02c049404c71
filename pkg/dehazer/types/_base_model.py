from __future__ import annotations

from typing import Any, Type, TypeVar

import pydantic

from dehazer.exceptions import ConfigurationError

__all__ = ["BaseModel", "Config"]


_ModelT = TypeVar("_ModelT", bound="BaseModel")


class Config(pydantic.BaseConfig):
    allow_mutation = False
    frozen = True
    extra = pydantic.Extra.forbid
    use_enum_values = False


class BaseModel(pydantic.BaseModel):
    __config__ = Config

    @classmethod
    def checked(cls: Type[_ModelT], **values: Any) -> _ModelT:
        """Construct the record, reporting validation failures as ``ConfigurationError``."""
        try:
            return cls(**values)
        except pydantic.ValidationError as e:
            raise ConfigurationError(f"invalid {cls.__name__}: {e}") from e

    def replace(self: _ModelT, **changes: Any) -> _ModelT:
        """Validated copy with ``changes`` applied."""
        return type(self).checked(**{**self.dict(), **changes})
