"""Full-scale acceptance criteria. Run with ``minors-acceptance`` from the repository root."""

import math
from pathlib import Path

import numpy as np
import pytest
import scipy.stats
from click.testing import CliRunner
from minors_cli.scripts.cli import cli
from minors_core.beadchain import run_bulk_chain
from minors_core.ensembles import (
    eigen_coordinates,
    extend_wigner,
    extend_wishart,
    sample_extension,
    sample_wigner,
    sample_wishart,
)
from minors_core.laws import (
    bulk_overlap_row,
    gap_law_constants,
    h_wigner,
    h_wishart_bulk,
    mp_edges,
    soft_edge_constant,
    wishart_gap_scale,
)
from minors_core.limits import gaussian_marks, sample_bessel, sample_sine
from minors_core.montecarlo import run_experiment
from minors_core.secular import psi_step, t_step
from minors_core.spectral import (
    ArrowheadMode,
    ArrowheadProblem,
    GapTable,
    SpectralData,
    arrowhead_eigen,
    eig_dense,
    overlap_matrix,
    ratio_identities_check,
    shift_identity_check,
)
from minors_core.streams import RandomStream
from minors_pydantic import EnsembleSpec, ExperimentConfig, ExperimentResult, ProcessKind, ProcessSpec, Side

pytestmark = pytest.mark.acceptance

IDENTITY_TOLERANCE = 1e-7


def _offset(result: ExperimentResult, label: str) -> float:
    for offset in result.offsets:
        if offset.label == label:
            assert offset.ks is not None
            return offset.ks
    raise KeyError(label)


def test_arrowhead_matches_dense_eigensolver() -> None:
    rng = RandomStream(101).generator()
    for n in rng.integers(5, 501, size=200):
        spec = EnsembleSpec(n=int(n))
        h = sample_wigner(spec, rng)
        extension = sample_extension(spec, rng)
        before = eig_dense(h)
        fast = arrowhead_eigen(ArrowheadProblem.wigner(before, extension))
        dense = eig_dense(extend_wigner(h, extension))
        scale = max(1.0, float(np.max(np.abs(dense.eigenvalues))))
        assert np.max(np.abs(fast.eigenvalues - dense.eigenvalues)) <= 1e-10 * scale
        fast_overlaps = overlap_matrix(fast, SpectralData.identity(before.eigenvalues)).entries
        dense_overlaps = overlap_matrix(dense, before).entries
        assert np.max(np.abs(fast_overlaps - dense_overlaps)) <= 1e-8


def test_wigner_identities() -> None:
    rng = RandomStream(102).generator()
    for instance in range(100):
        spec = EnsembleSpec(n=10 + instance, beta=1 + instance % 2)
        h = sample_wigner(spec, rng)
        extension = sample_extension(spec, rng)
        bordered = extend_wigner(h, extension)
        before, after = eig_dense(h), eig_dense(bordered)
        omega = overlap_matrix(after, before)
        coordinates = eigen_coordinates(before.eigenvectors, extension.border)
        report = ratio_identities_check(omega, GapTable(after.eigenvalues, before.eigenvalues), coordinates)
        assert report.max_residual <= IDENTITY_TOLERANCE
        assert omega.unitarity_error() <= IDENTITY_TOLERANCE

        embedded = np.zeros_like(bordered)
        embedded[: spec.n, : spec.n] = h
        embedded[spec.n, spec.n] = bordered[spec.n, spec.n]
        shift = shift_identity_check(embedded, bordered - embedded, [(i, i) for i in range(spec.n)], threshold=1e-6)
        assert shift.max_residual <= IDENTITY_TOLERANCE * max(1.0, float(np.max(np.abs(bordered))))


def test_wishart_identities() -> None:
    rng = RandomStream(103).generator()
    for instance in range(100):
        spec = EnsembleSpec(n=10 + instance, t=20 + 2 * instance)
        sample = sample_wishart(spec, rng)
        g = sample_extension(spec, rng).border
        extended = extend_wishart(sample.x, g)
        before, after = eig_dense(sample.w), eig_dense(extended.T @ extended)
        omega = overlap_matrix(after, before)
        coordinates = ArrowheadProblem.wishart(sample.x, before, g).coordinates
        gaps = GapTable(after.eigenvalues, before.eigenvalues)
        report = ratio_identities_check(omega, gaps, coordinates, mode=ArrowheadMode.wishart)
        assert report.max_residual <= IDENTITY_TOLERANCE
        assert omega.unitarity_error() <= IDENTITY_TOLERANCE


def test_wigner_edge_gap_law() -> None:
    config = ExperimentConfig(kind="gap_law_wigner", n=400, beta=1, replicas=4000, seed=3, side="left")
    result = run_experiment(config, progress=False)
    moments = result.offsets[0].empirical
    assert 0.93 <= moments.mean <= 1.07
    assert 1.8 <= moments.variance <= 2.2
    assert result.metrics["ks_exact"] <= 0.04


@pytest.mark.parametrize("side", [Side.right, Side.left])
def test_wishart_edge_gap_laws(side: Side) -> None:
    config = ExperimentConfig(kind="gap_law_wishart", n=300, q=0.25, replicas=3000, seed=4, side=side)
    result = run_experiment(config, progress=False)
    assert result.metrics["ks_exact"] <= 0.05


def test_bulk_mean_profile() -> None:
    for energy in (0.3, 1.4):
        config = ExperimentConfig(kind="wigner_bulk_mean_profile", n=100, energy=energy, replicas=10_000, seed=5)
        result = run_experiment(config, progress=False)
        means = {offset.offset: (offset.empirical.mean, offset.theoretical.mean) for offset in result.offsets}
        assert set(means) == set(range(-8, 9))
        for empirical, theoretical in means.values():
            assert abs(empirical - theoretical) <= 0.02
        for side in (0, 1):
            assert means[0][side] > means[-1][side]
            assert means[0][side] > means[1][side]


def test_bulk_histograms() -> None:
    config = ExperimentConfig(
        kind="wigner_bulk_hist", n=100, energy=0.3, reference_index=60, offsets=[-1, 0, 1, 2], replicas=10_000, seed=6
    )
    result = run_experiment(config, progress=False)
    for label in ("-1", "0", "1", "2"):
        assert _offset(result, label) <= 0.05


def test_wishart_soft_edge() -> None:
    config = ExperimentConfig(
        kind="wishart_soft_edge", n=100, q=0.9, side="right", pairs=[(1, 2), (2, 3)], replicas=10_000, seed=7
    )
    result = run_experiment(config, progress=False)
    for label in ("1:2", "2:3"):
        assert _offset(result, label) <= 0.06


def test_hard_edge() -> None:
    config = ExperimentConfig(
        kind="wishart_hard_edge",
        n=200,
        alpha=1,
        offsets=[-1, 0, 1, 2],
        window=80,
        approximant_size=1000,
        replicas=15_000,
        seed=8,
    )
    result = run_experiment(config, progress=False)
    for label in ("-1", "0", "1", "2"):
        assert _offset(result, label) <= 0.06


def test_band_decay() -> None:
    constants = []
    for n in (100, 200):
        result = run_experiment(ExperimentConfig(kind="band_decay", n=n, replicas=200, seed=9), progress=False)
        assert -1.3 <= result.metrics["slope"] <= -0.7
        constants.append(result.metrics["constant"])
    assert 0.5 <= constants[1] / constants[0] <= 2.0


def test_one_step_chain_matches_bulk_law() -> None:
    spec = ProcessSpec(kind=ProcessKind.sine, energy=0.3, window=64, approximant_size=1000)
    h = h_wigner(0.3)
    chain_values, law_values = [], []
    for replica in range(10_000):
        stream = RandomStream(10).child(replica)
        chain_rng, law_rng = stream.child(0).generator(), stream.child(1).generator()
        trajectory = run_bulk_chain(sample_sine(spec, chain_rng), h, 1, chain_rng)
        transition = trajectory[1].transition
        assert transition is not None
        row = transition.branch_row(-1)
        chain_values.append(abs(row[int(np.searchsorted(transition.column_offsets, 0))]))
        window = sample_sine(spec, law_rng)
        law_values.append(abs(bulk_overlap_row(window, h, -1)[window.position(0)]))
    assert scipy.stats.ks_2samp(chain_values, law_values).statistic <= 0.03


def test_steps_interlace() -> None:
    rng = RandomStream(11).generator()
    h = h_wigner(0.3)
    sine = ProcessSpec(kind=ProcessKind.sine, energy=0.3, window=64, approximant_size=600)
    bessel = ProcessSpec(kind=ProcessKind.bessel, alpha=3, window=40, approximant_size=400)
    violations = 0
    for _ in range(5000):
        bulk = sample_sine(sine, rng)
        new = psi_step(bulk, None, h)
        violations += int(np.any(np.diff(np.searchsorted(bulk.points, new.points)) != 1))
        hard = sample_bessel(bessel, rng)
        marks = gaussian_marks(hard.size, 1, rng)
        roots = t_step(hard, marks, float(rng.chisquare(3)))
        violations += int(np.any(np.diff(np.searchsorted(hard.points, roots.points)) != 1))
    assert violations == 0


@pytest.mark.parametrize("energy", np.linspace(-1.9, 1.9, 39))
def test_wigner_level(energy: float) -> None:
    assert h_wigner(energy) == pytest.approx(-energy / (2 * math.sqrt(4 - energy**2)), abs=1e-12)


@pytest.mark.parametrize("q", [0.05, 0.25, 0.5, 0.9, 1.0])
def test_wishart_constants(q: float) -> None:
    lower, upper = mp_edges(q)
    assert lower == pytest.approx((1 - math.sqrt(q)) ** 2, abs=1e-12)
    assert upper == pytest.approx((1 + math.sqrt(q)) ** 2, abs=1e-12)
    assert soft_edge_constant(q, Side.right) == pytest.approx((1 + math.sqrt(q)) ** (-1 / 3), abs=1e-12)
    assert wishart_gap_scale(q, Side.right) == pytest.approx(math.sqrt(q) / (1 + math.sqrt(q)), abs=1e-12)
    if q < 1:
        assert soft_edge_constant(q, Side.left) == pytest.approx((1 - math.sqrt(q)) ** (-1 / 3), abs=1e-12)
        assert wishart_gap_scale(q, Side.left) == pytest.approx(-math.sqrt(q) / (1 - math.sqrt(q)), abs=1e-12)
    for energy in np.linspace(lower, upper, 9)[1:-1]:
        expected = -q * (energy + q - 1) / (2 * math.sqrt((upper - energy) * (energy - lower)))
        assert h_wishart_bulk(energy, q) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("energy", [0.5, 1.0, 2.0, 3.5])
def test_square_wishart_level(energy: float) -> None:
    assert h_wishart_bulk(energy, 1.0) == pytest.approx(-math.sqrt(energy) / (2 * math.sqrt(4 - energy)), abs=1e-12)


def test_gap_law_normalization() -> None:
    assert gap_law_constants(1).normalization == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-12)
    assert gap_law_constants(2).normalization == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "command",
    [
        ["gap-law-wigner", "--N", "60", "--side", "left"],
        ["wigner-bulk", "--N", "60", "--E", "0.3", "--offsets=-1,0,1,2", "--window", "32", "--approximant-size", "300"],
        ["band-decay", "--N", "40"],
    ],
)
def test_output_independent_of_workers(command: list[str], tmp_path: Path) -> None:
    runner = CliRunner()
    outputs = {}
    for workers in ("1", "3"):
        directory = tmp_path / workers
        arguments = ["--output-dir", str(directory), "--workers", workers, "--quiet", *command]
        result = runner.invoke(cli, [*arguments, "--replicas", "60", "--seed", "12"])
        assert result.exit_code == 0, result.output
        outputs[workers] = {path.name: path.read_bytes() for path in directory.iterdir() if "manifest" not in path.name}
    assert outputs["1"] == outputs["3"]
    assert len(outputs["1"]) == 2
