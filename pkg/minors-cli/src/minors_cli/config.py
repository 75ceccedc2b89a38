"""Experiment configuration from a JSON file and command-line flags."""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from minors_pydantic import ExperimentConfig, ExperimentKind
from pydantic import ValidationError

from minors_cli.exceptions import ConfigError

logger = logging.getLogger(__name__)


def read_config_file(path: Path) -> dict[str, Any]:
    """The JSON object stored at ``path``."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as error:
        raise ConfigError(f"cannot read {path}: {error}") from error
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return data


def parse_config(
    kind: ExperimentKind, flags: Mapping[str, Any], path: Path | None = None
) -> tuple[ExperimentConfig, list[str]]:
    """Validated config for ``kind`` and the file keys that flags overrode.

    Flags left unset (``None``) fall through to the file, then to the per-kind defaults.

    Raises:
        ConfigError: If the file is unreadable, names another kind, or the merged keys do not validate.
    """
    data = read_config_file(path) if path is not None else {}
    if data.get("kind", kind) != kind:
        raise ConfigError(f"config file describes {data['kind']}, not {kind}")
    given = {key: value for key, value in flags.items() if value is not None}
    overrides = sorted(key for key in given if key in data and data[key] != given[key])
    if overrides:
        logger.info("flags override config file keys: %s", ", ".join(overrides))
    try:
        config = ExperimentConfig.model_validate({**data, **given, "kind": kind})
    except ValidationError as error:
        raise ConfigError.from_validation_error(error) from error
    return config, overrides
