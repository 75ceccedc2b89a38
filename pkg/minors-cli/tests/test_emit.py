import hashlib
import json
from pathlib import Path

import pytest
from minors_cli import EmitError, OutputFormat, emit, write_manifest
from minors_cli.emit import CSV_HEADER, emit_trajectory
from minors_core.beadchain import run_hard_edge_chain
from minors_core.limits import sample_bessel
from minors_core.streams import RandomStream
from minors_pydantic import (
    ExperimentConfig,
    ExperimentResult,
    Histogram,
    Moments,
    OffsetResult,
    ProcessKind,
    ProcessSpec,
    RunManifest,
)

MOMENTS = Moments(count=10, mean=0.2, variance=0.01)


def _edge_result() -> ExperimentResult:
    config = ExperimentConfig(kind="wigner_edge", n=50, seed=2, replicas=10)
    histogram = Histogram(edges=[0.0, 0.5, 1.0], empirical=[0.8, 1.2], theoretical=[1.0, 1.0])
    offset = OffsetResult(pair=(1, 2), histogram=histogram, ks=0.1, empirical=MOMENTS, theoretical=MOMENTS)
    return ExperimentResult(kind=config.kind, config=config, replicas=10, offsets=[offset])


def _lines(path: Path) -> list[str]:
    return path.read_text(encoding="utf-8").splitlines()


def test_emit_both(tmp_path: Path) -> None:
    result = _edge_result()
    csv_path, json_path = emit(result, tmp_path / "out")
    assert csv_path.name == "wigner_edge.csv"
    assert _lines(csv_path) == [
        ",".join(CSV_HEADER),
        "wigner_edge,1:2,0.0,0.5,0.8,1.0",
        "wigner_edge,1:2,0.5,1.0,1.2,1.0",
    ]
    assert ExperimentResult.model_validate_json(json_path.read_text(encoding="utf-8")) == result


def test_emit_one_format(tmp_path: Path) -> None:
    assert [path.name for path in emit(_edge_result(), tmp_path, OutputFormat.json)] == ["wigner_edge.json"]


def test_empty_result_has_a_header_only(tmp_path: Path) -> None:
    result = _edge_result().model_copy(update={"offsets": []})
    (csv_path,) = emit(result, tmp_path, OutputFormat.csv)
    assert _lines(csv_path) == [",".join(CSV_HEADER)]


def test_band_decay_rows(tmp_path: Path) -> None:
    config = ExperimentConfig(kind="band_decay", n=40, seed=3, replicas=10)
    fitted = Moments(count=0, mean=0.1, variance=0.0)
    result = ExperimentResult(
        kind=config.kind,
        config=config,
        replicas=10,
        offsets=[OffsetResult(offset=3, empirical=MOMENTS, theoretical=fitted)],
        metrics={"slope": -1.0, "constant": 0.3},
    )
    (csv_path,) = emit(result, tmp_path, OutputFormat.csv)
    assert _lines(csv_path)[1:] == ["band_decay,3,3.0,3.0,0.2,0.1"]


def test_unwritable_directory(tmp_path: Path) -> None:
    blocker = tmp_path / "taken"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(EmitError, match="cannot create"):
        emit(_edge_result(), blocker)


def test_manifest_digests(tmp_path: Path) -> None:
    result = _edge_result()
    files = emit(result, tmp_path)
    path = write_manifest(RunManifest.new(result.config, 0.5), files, tmp_path / "wigner_edge.manifest.json")
    manifest = json.loads(path.read_text(encoding="utf-8"))
    assert manifest["digests"] == {file.name: hashlib.sha256(file.read_bytes()).hexdigest() for file in files}
    assert manifest["seed"] == 2


def test_trajectory_file(tmp_path: Path) -> None:
    rng = RandomStream(5).generator()
    initial = sample_bessel(ProcessSpec(kind=ProcessKind.bessel, alpha=3, window=5, approximant_size=50), rng)
    path = emit_trajectory(run_hard_edge_chain(3, 1, 5, rng, initial=initial), tmp_path / "chain" / "trajectory.csv")
    lines = _lines(path)
    assert lines[0] == "step,offset,point,mark"
    assert len(lines) == 11
    assert lines[-1].endswith(",nan")
