from __future__ import annotations

from typing import Any

from pydantic import ValidationError


def _key_path(location: tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in location) or "config"


class ConfigError(Exception):
    """Raised when a config file or set of flags does not describe a valid experiment."""

    @classmethod
    def from_validation_error(cls, error: ValidationError) -> ConfigError:
        problems = "; ".join(f"{_key_path(item['loc'])}: {item['msg']}" for item in error.errors())
        return cls(f"invalid config: {problems}")


class EmitError(Exception):
    """Raised when an output file cannot be written"""
