import enum
from typing import Any

__all__ = ["JsonableEnum", "FindableEnum"]


class JsonableEnum:
    def as_jsonable_value(self) -> Any:
        return self.__getattribute__("value")


class FindableEnum:
    @classmethod
    def find_member(cls, member: Any) -> enum.Enum:
        assert issubclass(cls, enum.Enum)
        members = cls.__members__

        if isinstance(member, cls):
            return member
        if isinstance(member, str):
            normalized = member.strip()
            if normalized in members:
                return members[normalized]
            for _member in members.values():
                if _member.value == normalized or _member.name.lower() == normalized.lower():
                    return _member
            raise KeyError(member)

        raise TypeError(f"invalid member type: {type(member)}")
