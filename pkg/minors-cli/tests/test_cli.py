import json
from pathlib import Path

from click.testing import CliRunner
from minors_cli.scripts.cli import cli
from minors_cli.version import __version__

BAND = ["band-decay", "--N", "20", "--replicas", "3", "--seed", "1"]


def _invoke(*arguments: str) -> tuple[int, str]:
    result = CliRunner().invoke(cli, list(arguments))
    return result.exit_code, result.output


def test_version() -> None:
    code, output = _invoke("--version")
    assert code == 0
    assert __version__ in output


def test_constants() -> None:
    code, output = _invoke("constants", "--E", "0.3", "--q", "1")
    assert code == 0
    table = json.loads(output)
    assert table["c_q_left"] is None
    assert table["lambda_plus"] == 4.0


def test_constants_outside_the_bulk() -> None:
    code, output = _invoke("constants", "--E", "2.5")
    assert code == 1
    assert "E must lie in (-2,2)" in output


def test_band_decay_writes_results_and_manifest(tmp_path: Path) -> None:
    code, output = _invoke("--output-dir", str(tmp_path), "--quiet", *BAND)
    assert code == 0, output
    names = sorted(path.name for path in tmp_path.iterdir())
    assert names == ["band_decay.csv", "band_decay.json", "band_decay.manifest.json"]
    assert len((tmp_path / "band_decay.csv").read_text(encoding="utf-8").splitlines()) == 11
    assert str(tmp_path / "band_decay.csv") in output


def test_json_only(tmp_path: Path) -> None:
    code, output = _invoke("--output-dir", str(tmp_path), "--format", "json", "--quiet", *BAND)
    assert code == 0, output
    assert sorted(path.name for path in tmp_path.iterdir()) == ["band_decay.json", "band_decay.manifest.json"]


def test_reruns_are_byte_identical(tmp_path: Path) -> None:
    for name in ("first", "second"):
        arguments = ["--output-dir", str(tmp_path / name), "--quiet", "gap-law-wigner", "--N", "30"]
        code, output = _invoke(*arguments, *BAND[3:])
        assert code == 0, output
    for name in ("gap_law_wigner.csv", "gap_law_wigner.json"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_config_file_with_override(tmp_path: Path) -> None:
    config = tmp_path / "band.json"
    config.write_text(json.dumps({"kind": "band_decay", "n": 24, "seed": 1, "replicas": 2}), encoding="utf-8")
    code, output = _invoke("--output-dir", str(tmp_path), "--quiet", "band-decay", "--config", str(config), "--N", "20")
    assert code == 0, output
    manifest = json.loads((tmp_path / "band_decay.manifest.json").read_text(encoding="utf-8"))
    assert manifest["overrides"] == ["n"]
    assert manifest["config"]["n"] == 20
    assert set(manifest["digests"]) == {"band_decay.csv", "band_decay.json"}


def test_missing_seed(tmp_path: Path) -> None:
    code, output = _invoke("--output-dir", str(tmp_path), "band-decay", "--N", "20")
    assert code == 1
    assert "seed: Field required" in output


def test_invalid_energy(tmp_path: Path) -> None:
    code, output = _invoke("--output-dir", str(tmp_path), "wigner-bulk", "--N", "60", "--seed", "1", "--E", "2.5")
    assert code == 1
    assert "E must lie in (-2,2)" in output


def test_bulk_trajectory(tmp_path: Path) -> None:
    arguments = ["trajectory", "--seed", "3", "--steps", "2", "--window", "16", "--approximant-size", "200"]
    code, output = _invoke("--output-dir", str(tmp_path), *arguments)
    assert code == 0, output
    lines = (tmp_path / "trajectory.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "step,offset,point,mark"
    assert lines[1].startswith("0,-16,")


def test_hard_edge_trajectory_needs_alpha_above_steps(tmp_path: Path) -> None:
    arguments = ["trajectory", "--chain", "hard-edge", "--seed", "3", "--alpha", "1", "--window", "5"]
    code, output = _invoke("--output-dir", str(tmp_path), *arguments, "--approximant-size", "50")
    assert code == 1
    assert "alpha > K" in output
