import json
from pathlib import Path

import pytest
from minors_cli import ConfigError, parse_config
from minors_pydantic import ExperimentKind


def _write(path: Path, data: object) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_flags_only() -> None:
    config, overrides = parse_config(ExperimentKind.band_decay, {"n": 40, "seed": 1, "replicas": None})
    assert config.n == 40
    assert config.replicas == 1000
    assert overrides == []


def test_flags_override_the_file(tmp_path: Path) -> None:
    path = _write(tmp_path / "band.json", {"kind": "band_decay", "n": 40, "seed": 1, "replicas": 10})
    config, overrides = parse_config(ExperimentKind.band_decay, {"n": 60, "seed": 1, "replicas": None}, path)
    assert config.n == 60
    assert config.replicas == 10
    assert overrides == ["n"]


def test_file_for_another_kind(tmp_path: Path) -> None:
    path = _write(tmp_path / "gap.json", {"kind": "gap_law_wigner", "n": 40, "seed": 1})
    with pytest.raises(ConfigError, match="describes gap_law_wigner"):
        parse_config(ExperimentKind.band_decay, {}, path)


def test_model_level_errors_name_the_config() -> None:
    with pytest.raises(ConfigError, match=r"^invalid config: config: .*E must lie in \(-2,2\)"):
        parse_config(ExperimentKind.wigner_bulk_hist, {"n": 60, "seed": 1, "energy": 2.5})


def test_field_errors_name_the_key() -> None:
    with pytest.raises(ConfigError, match="^invalid config: n: "):
        parse_config(ExperimentKind.band_decay, {"n": 0, "seed": 1})


def test_unknown_file_keys(tmp_path: Path) -> None:
    path = _write(tmp_path / "band.json", {"n": 40, "seed": 1, "repetitions": 3})
    with pytest.raises(ConfigError, match="repetitions"):
        parse_config(ExperimentKind.band_decay, {}, path)


@pytest.mark.parametrize("text, message", [("{not json", "cannot read"), ("[1, 2]", "must hold a JSON object")])
def test_unreadable_files(text: str, message: str, tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError, match=message):
        parse_config(ExperimentKind.band_decay, {}, path)
