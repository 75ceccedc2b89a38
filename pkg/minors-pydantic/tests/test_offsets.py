import pytest
from minors_pydantic import IndexPairs, Offsets
from pydantic import TypeAdapter, ValidationError


def test_offsets_from_string() -> None:
    assert TypeAdapter(Offsets).validate_python("-1,0,1,2") == [-1, 0, 1, 2]


def test_offsets_are_sorted() -> None:
    assert TypeAdapter(Offsets).validate_python([2, -1, 0]) == [-1, 0, 2]


def test_offsets_must_be_distinct() -> None:
    with pytest.raises(ValidationError, match="distinct"):
        TypeAdapter(Offsets).validate_python("1,1")


def test_offsets_json_schema() -> None:
    assert TypeAdapter(Offsets).json_schema() == {"type": "array", "items": {"type": "integer"}}


def test_pairs_from_string() -> None:
    assert TypeAdapter(IndexPairs).validate_python("1:2,2:3") == [(1, 2), (2, 3)]
