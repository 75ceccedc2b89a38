from typing import Annotated, Any

from pydantic import (
    AfterValidator,
    BeforeValidator,
    WithJsonSchema,
)


def validate_before(value: Any) -> Any:
    if isinstance(value, str):
        return [int(part) for part in value.split(",") if part.strip()]
    return value


def validate_after(value: list[int]) -> list[int]:
    if len(set(value)) != len(value):
        raise ValueError("offsets must be distinct")
    return sorted(value)


Offsets = Annotated[
    list[int],
    BeforeValidator(validate_before),
    AfterValidator(validate_after),
    WithJsonSchema({"type": "array", "items": {"type": "integer"}}),
]
"""Sorted distinct integer offsets, given as a list or as a string like ``"-1,0,1,2"``."""


def validate_pairs(value: Any) -> Any:
    if isinstance(value, str):
        pairs = []
        for chunk in value.split(","):
            left, right = chunk.split(":", 1)
            pairs.append((int(left), int(right)))
        return pairs
    return value


IndexPairs = Annotated[
    list[tuple[int, int]],
    BeforeValidator(validate_pairs),
    WithJsonSchema({"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}),
]
"""1-based index pairs (i, j), given as a list or as a string like ``"1:2,2:3"``."""
