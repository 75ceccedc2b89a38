import json
import logging
import time
from collections.abc import Callable, Iterator
from contextlib import AbstractContextManager, contextmanager, nullcontext
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click
import numpy as np
from minors_core.beadchain import ChainState, run_bulk_chain, run_hard_edge_chain
from minors_core.errors import MinorsError, ReplicaFailureError
from minors_core.laws import h_wigner
from minors_core.limits import sample_bessel, sample_sine
from minors_core.montecarlo import run_experiment
from minors_core.streams import RandomStream
from minors_core.warns import MinorsWarning, strict
from minors_pydantic import (
    Approximant,
    EntryLaw,
    ExperimentConfig,
    ExperimentKind,
    ExperimentResult,
    ProcessKind,
    ProcessSpec,
    RunManifest,
    Side,
)
from pydantic import ValidationError

from minors_cli.config import parse_config
from minors_cli.emit import OutputFormat, emit, emit_trajectory, write_manifest
from minors_cli.exceptions import ConfigError, EmitError
from minors_cli.tables import constants_table
from minors_cli.version import __version__

logger = logging.getLogger(__name__)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


@dataclass(frozen=True)
class RunOptions:
    output_dir: Path
    output_format: OutputFormat
    workers: int | None
    quiet: bool
    strict: bool

    def warnings(self) -> AbstractContextManager[None]:
        return strict() if self.strict else nullcontext()


@contextmanager
def reported() -> Iterator[None]:
    """Turns library, config and output failures into a one-line message and exit code 1."""
    try:
        yield
    except ValidationError as error:
        raise click.ClickException(str(ConfigError.from_validation_error(error))) from error
    except (MinorsError, MinorsWarning, ConfigError, EmitError) as error:
        raise click.ClickException(str(error)) from error


@click.group()
@click.version_option(__version__, prog_name="minors")
@click.option(
    "--output-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("."),
    show_default=True,
    help="Directory for the output files",
)
@click.option(
    "--format",
    "output_format",
    type=click.Choice([f.value for f in OutputFormat]),
    default=OutputFormat.both.value,
    show_default=True,
    help="Which result files to write",
)
@click.option("--workers", type=click.IntRange(min=1), help="Worker processes (default: MINORS_WORKERS or 1)")
@click.option("--quiet", is_flag=True, help="Hide the replica counter")
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging")
@click.option("--strict", "strict_warnings", is_flag=True, help="Treat minors warnings as errors")
@click.pass_context
def cli(
    ctx: click.Context,
    output_dir: Path,
    output_format: str,
    workers: int | None,
    quiet: bool,
    verbose: int,
    strict_warnings: bool,
) -> None:
    """Random matrix minor-process experiments. Group sets up logging and run options."""

    logging.basicConfig(level=LOG_LEVELS[min(verbose, 2)], format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = RunOptions(
        output_dir=output_dir,
        output_format=OutputFormat(output_format),
        workers=workers,
        quiet=quiet,
        strict=strict_warnings,
    )


def _execute(config: ExperimentConfig, run: RunOptions) -> tuple[ExperimentResult, ReplicaFailureError | None]:
    try:
        return run_experiment(config, workers=run.workers, progress=not run.quiet), None
    except ReplicaFailureError as error:
        return error.result, error


def run_kind(run: RunOptions, kind: ExperimentKind, config_path: Path | None, flags: dict[str, Any]) -> None:
    """Parses, runs and emits one experiment; outputs are written even when too many replicas failed."""
    started = time.perf_counter()
    with reported():
        config, overrides = parse_config(kind, flags, config_path)
        with run.warnings():
            result, failure = _execute(config, run)
        files = emit(result, run.output_dir, run.output_format)
        manifest = RunManifest.new(config, time.perf_counter() - started, overrides)
        files.append(write_manifest(manifest, files, run.output_dir / f"{kind}.manifest.json"))
        if failure is not None:
            raise failure
    for path in files:
        click.echo(path)


Decorator = Callable[[Any], Any]

COMMON_OPTIONS: tuple[Decorator, ...] = (
    click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="JSON config file; flags override its keys",
    ),
    click.option("--seed", type=click.IntRange(min=0), help="Seed of the replica streams (here or in --config)"),
    click.option("--N", "n", type=click.IntRange(min=1), help="Matrix size before the extension"),
    click.option("--replicas", type=click.IntRange(min=1), help="Monte Carlo replicas [default: 1000]"),
    click.option("--beta", type=click.IntRange(min=1, max=2), help="1 (real) or 2 (complex)"),
    click.option("--entry-law", type=click.Choice([law.value for law in EntryLaw]), help="Law of the matrix entries"),
    click.option("--goe-diagonal/--unit-diagonal", default=None, help="Diagonal variance 2 instead of 1"),
    click.option("--bins", type=click.IntRange(min=1), help="Histogram bins [default: Freedman-Diaconis]"),
    click.option("--window", type=click.IntRange(min=1), help="Half-width M (sine) or number of edge points"),
    click.option("--approximant-size", type=click.IntRange(min=1), help="Matrix size of the limit approximant"),
    click.option(
        "--approximant", type=click.Choice([a.value for a in Approximant]), help="How limit windows are sampled"
    ),
)
ENERGY = click.option("--E", "energy", type=float, help="Energy: semicircle units (Wigner), eigenvalue/T (Wishart)")
ASPECT = click.option("--q", type=float, help="Aspect ratio N/T in (0, 1]")
ALPHA = click.option("--alpha", type=click.IntRange(min=1), help="T - N at the hard edge")
SIDE = click.option("--side", type=click.Choice([s.value for s in Side]), help="Which edge")
OFFSETS = click.option("--offsets", type=str, help='Comma-separated offsets k, e.g. "-1,0,1,2"')
PAIRS = click.option("--pairs", type=str, help='1-based edge index pairs, e.g. "1:2,2:3"')
REFERENCE = click.option("--reference-index", type=click.IntRange(min=1), help="Fixed 1-based index i")
EDGE_INDEX = click.option("--edge-index", type=click.IntRange(min=1), help="1-based index counted from the edge")
STEPS = click.option("--steps", type=click.IntRange(min=1), help="Number K of appended rows")
CALIBRATION = click.option("--calibration", type=click.FloatRange(min=0.0, min_open=True), help="Rescaling factor")


def experiment_command(name: str, kind: ExperimentKind, summary: str, *options: Decorator) -> click.Command:
    """A subcommand running ``kind`` with the common options plus ``options``."""

    @click.pass_obj
    def callback(run: RunOptions, config_path: Path | None, **flags: Any) -> None:
        run_kind(run, kind, config_path, flags)

    command: Any = callback
    for option in reversed((*COMMON_OPTIONS, *options)):
        command = option(command)
    return click.command(name, help=summary)(command)


EXPERIMENTS: tuple[tuple[str, ExperimentKind, str, tuple[Decorator, ...]], ...] = (
    (
        "wigner-bulk",
        ExperimentKind.wigner_bulk_hist,
        "Histograms of |Omega_{i,i-k}| at a bulk anchor vs the sine-window law.",
        (ENERGY, OFFSETS, REFERENCE),
    ),
    (
        "wigner-bulk-profile",
        ExperimentKind.wigner_bulk_mean_profile,
        "Mean |Omega_{i,i-k}| against offset k at a bulk anchor.",
        (ENERGY, OFFSETS),
    ),
    ("wigner-edge", ExperimentKind.wigner_edge, "N^{1/3}(Omega - I) at a Wigner edge vs the Airy law.", (SIDE, PAIRS)),
    (
        "wishart-soft-edge",
        ExperimentKind.wishart_soft_edge,
        "N^{1/3}(Omega - I) at a Wishart soft edge vs the c_q-scaled Airy law.",
        (ASPECT, SIDE, PAIRS),
    ),
    (
        "wishart-hard-edge",
        ExperimentKind.wishart_hard_edge,
        "|Omega_{i,i-k}| at the hard edge vs the Bessel-window law.",
        (ALPHA, OFFSETS, REFERENCE),
    ),
    (
        "wishart-bulk",
        ExperimentKind.wishart_bulk,
        "|Omega_{i,i-k}| at a Marchenko-Pastur bulk anchor vs the rescaled sine-window law.",
        (ENERGY, ASPECT, OFFSETS, CALIBRATION),
    ),
    (
        "gap-law-wigner",
        ExperimentKind.gap_law_wigner,
        "Scaled Wigner edge increments vs the Gamma law.",
        (SIDE, EDGE_INDEX),
    ),
    (
        "gap-law-wishart",
        ExperimentKind.gap_law_wishart,
        "Scaled Wishart edge increments vs the Gamma law.",
        (ASPECT, SIDE, EDGE_INDEX),
    ),
    ("band-decay", ExperimentKind.band_decay, "Decay in k of the overlap mass at distance at least k.", ()),
    (
        "beadchain-kstep",
        ExperimentKind.beadchain_kstep,
        "K-step overlaps with per-level anchors vs the bead-chain product.",
        (ENERGY, OFFSETS, STEPS),
    ),
)


def _chain(chain: str, spec: ProcessSpec, energy: float, steps: int, rng: np.random.Generator) -> list[ChainState]:
    match chain:
        case "bulk":
            return run_bulk_chain(sample_sine(spec, rng), h_wigner(energy), steps, rng)
        case "hard-edge":
            return run_hard_edge_chain(spec.alpha, steps, spec.half_width, rng, initial=sample_bessel(spec, rng))
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


@click.command()
@click.pass_obj
@click.option("--chain", type=click.Choice(["bulk", "hard-edge"]), default="bulk", show_default=True)
@click.option("--seed", type=click.IntRange(min=0), required=True, help="Seed of the chain's stream")
@click.option("--steps", type=click.IntRange(min=1), default=1, show_default=True, help="Number of chain steps")
@click.option("--E", "energy", type=float, default=0.0, show_default=True, help="Bulk energy in (-2, 2)")
@click.option("--alpha", type=click.IntRange(min=1), default=2, show_default=True, help="Hard-edge alpha, above steps")
@click.option("--beta", type=click.IntRange(min=1, max=2), default=1, show_default=True)
@click.option("--window", type=click.IntRange(min=1), help="Half-width M (bulk) or number of points (hard edge)")
@click.option("--approximant-size", type=click.IntRange(min=1), help="Matrix size of the limit approximant")
def trajectory(
    run: RunOptions,
    chain: str,
    seed: int,
    steps: int,
    energy: float,
    alpha: int,
    beta: int,
    window: int | None,
    approximant_size: int | None,
) -> None:
    """Bead-chain trajectory as CSV rows step,offset,point,mark."""

    rng = RandomStream(seed).generator()
    with reported(), run.warnings():
        kind = ProcessKind.sine if chain == "bulk" else ProcessKind.bessel
        spec = ProcessSpec(
            kind=kind,
            beta=beta,
            alpha=alpha if kind == ProcessKind.bessel else 0,
            energy=energy,
            window=window,
            approximant_size=approximant_size,
        )
        path = emit_trajectory(_chain(chain, spec, energy, steps, rng), run.output_dir / "trajectory.csv")
    click.echo(path)


@click.command()
@click.option("--E", "energy", type=float, help="Wigner bulk energy in (-2, 2)")
@click.option("--q", type=float, help="Wishart aspect ratio N/T in (0, 1]")
@click.option("--mp-E", "mp_energy", type=float, help="Marchenko-Pastur bulk energy (needs --q)")
def constants(energy: float | None, q: float | None, mp_energy: float | None) -> None:
    """Print the deterministic constants table as JSON."""

    with reported():
        table = constants_table(energy, q, mp_energy)
    click.echo(json.dumps(table, indent=2))


for name, kind, summary, options in EXPERIMENTS:
    cli.add_command(experiment_command(name, kind, summary, *options))
cli.add_command(trajectory)
cli.add_command(constants)

if __name__ == "__main__":
    try:
        cli()
    except Exception as e:
        click.echo(f"Error: {e=}", err=True)
        raise e
