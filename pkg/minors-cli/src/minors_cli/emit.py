"""CSV, JSON and manifest files for an experiment result.

Floats are written in their shortest round-trip form, so rerunning an experiment with the same
seed reproduces every file byte for byte (the manifest, which records wall time, excepted).
"""

from __future__ import annotations

import csv
import hashlib
import logging
from collections.abc import Iterator
from enum import StrEnum
from pathlib import Path

from minors_core.beadchain import ChainState, trajectory_rows
from minors_pydantic import ExperimentKind, ExperimentResult, RunManifest

from minors_cli.exceptions import EmitError

logger = logging.getLogger(__name__)

CSV_HEADER = ("experiment", "offset", "bin_left", "bin_right", "density_empirical", "density_theoretical")
TRAJECTORY_HEADER = ("step", "offset", "point", "mark")


class OutputFormat(StrEnum):
    csv = "csv"
    json = "json"
    both = "both"


def number(value: float) -> str:
    return repr(float(value))


def csv_rows(result: ExperimentResult) -> Iterator[tuple[str, ...]]:
    """Histogram rows in offset order, then bin order.

    Band decay has no histograms; its rows carry k as both bin edges, the measured mean tail mass
    and the fitted C/k.
    """
    for offset in result.offsets:
        if offset.histogram is not None:
            for left, right, empirical, theoretical in offset.histogram.bins():
                yield (result.kind, offset.label, number(left), number(right), number(empirical), number(theoretical))
        elif result.kind == ExperimentKind.band_decay and offset.offset is not None:
            k = number(offset.offset)
            yield (result.kind, offset.label, k, k, number(offset.empirical.mean), number(offset.theoretical.mean))


def _write_rows(path: Path, header: tuple[str, ...], rows: Iterator[tuple[str, ...]]) -> Path:
    try:
        with path.open("w", encoding="utf-8", newline="") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as error:
        raise EmitError(f"cannot write {path}: {error}") from error
    logger.info("wrote %s", path)
    return path


def _write_text(path: Path, text: str) -> Path:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as error:
        raise EmitError(f"cannot write {path}: {error}") from error
    logger.info("wrote %s", path)
    return path


def _ensure_dir(output_dir: Path) -> None:
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise EmitError(f"cannot create {output_dir}: {error}") from error


def emit(result: ExperimentResult, output_dir: Path, output_format: OutputFormat = OutputFormat.both) -> list[Path]:
    """Writes ``<kind>.csv`` and/or ``<kind>.json`` into ``output_dir``.

    Raises:
        EmitError: If a file cannot be written.
    """
    _ensure_dir(output_dir)
    written: list[Path] = []
    if output_format in (OutputFormat.csv, OutputFormat.both):
        written.append(_write_rows(output_dir / f"{result.kind}.csv", CSV_HEADER, csv_rows(result)))
    if output_format in (OutputFormat.json, OutputFormat.both):
        written.append(_write_text(output_dir / f"{result.kind}.json", result.model_dump_json(indent=2) + "\n"))
    return written


def digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(manifest: RunManifest, files: list[Path], path: Path) -> Path:
    """Writes ``manifest`` with the SHA-256 digest of every file in ``files``."""
    try:
        digests = {file.name: digest(file) for file in files}
    except OSError as error:
        raise EmitError(f"cannot hash outputs: {error}") from error
    stamped = manifest.model_copy(update={"digests": digests})
    return _write_text(path, stamped.model_dump_json(indent=2) + "\n")


def emit_trajectory(trajectory: list[ChainState], path: Path) -> Path:
    _ensure_dir(path.parent)
    rows = (
        (str(step), str(offset), number(point), number(mark))
        for step, offset, point, mark in trajectory_rows(trajectory)
    )
    return _write_rows(path, TRAJECTORY_HEADER, rows)
