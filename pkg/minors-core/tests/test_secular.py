import math

import numpy as np
import pytest
from minors_core.errors import PoleEvaluationError, SpecificationError, WindowError
from minors_core.limits import SINE_DENSITY
from minors_core.secular import (
    BasisState,
    PointConfiguration,
    hard_edge_D,
    hard_edge_phi_step,
    hard_edge_root,
    inverse_branch,
    inverse_branch_derivative,
    phi_step,
    psi_step,
    stieltjes_derivative,
    stieltjes_S,
    stieltjes_tail_bound,
    t_step,
)
from minors_core.warns import WindowTruncationWarning
from minors_pydantic import ProcessKind


def _finite() -> PointConfiguration:
    return PointConfiguration.finite([-2.0, -1.0, 1.0, 3.0], marks=[1.0, 0.5, 2.0, 1.0])


def test_points_must_ascend() -> None:
    with pytest.raises(SpecificationError):
        PointConfiguration.finite([0.0, 0.0, 1.0])


def test_bulk_windows_are_symmetric() -> None:
    with pytest.raises(SpecificationError):
        PointConfiguration(
            points=np.array([0.0, 1.0, 2.0]), offsets=np.arange(0, 3, dtype=np.intp), kind=ProcessKind.sine
        )


def test_stieltjes_at_a_point() -> None:
    with pytest.raises(PoleEvaluationError):
        stieltjes_S(_finite(), 1.0)


def test_inverse_branch_solves_the_level() -> None:
    config = _finite()
    z = inverse_branch(config, 0.3, 1)
    assert -1.0 < z < 1.0
    assert stieltjes_S(config, z) == pytest.approx(0.3, abs=1e-10)
    assert inverse_branch_derivative(config, 0.3, 1) == pytest.approx(1.0 / stieltjes_derivative(config, z))
    assert stieltjes_tail_bound(config, z) == 0.0


def test_inverse_branch_outside_the_window() -> None:
    with pytest.raises(SpecificationError):
        inverse_branch(_finite(), 0.3, 3)


def test_branch_too_close_to_the_window_edge() -> None:
    offsets = np.arange(-4, 5, dtype=np.intp)
    config = PointConfiguration(
        points=2.0 * math.pi * offsets, offsets=offsets, marks=np.ones(9), kind=ProcessKind.sine, density=SINE_DENSITY
    )
    with pytest.raises(WindowError) as error:
        inverse_branch(config, 0.0, 1)
    assert error.value.required_window == 12


def test_tail_bound_above_tolerance_warns(bulk_window: PointConfiguration) -> None:
    with pytest.warns(WindowTruncationWarning):
        inverse_branch(bulk_window, 0.0, -1, tail_tolerance=1e-6)


def test_density_adds_the_tail_to_the_derivative(bulk_window: PointConfiguration) -> None:
    z = inverse_branch(bulk_window, 0.0, -1)
    assert stieltjes_derivative(bulk_window, z) > stieltjes_derivative(bulk_window, z, tail=False)


def test_hard_edge_root() -> None:
    config = PointConfiguration.finite([1.0, 3.0, 6.0], marks=[1.0, 1.0, 1.0], first_offset=1)
    first = hard_edge_root(config, 2.0, 1)
    second = hard_edge_root(config, 2.0, 2)
    assert 0.0 < first < 1.0 < second < 3.0
    assert hard_edge_D(config, 2.0, first) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(PoleEvaluationError):
        hard_edge_D(config, 2.0, 0.0)
    with pytest.raises(SpecificationError):
        hard_edge_root(config, -1.0, 1)


@pytest.mark.parametrize("chi", [1e-3, 0.5, 3.0, 20.0])
def test_first_hard_edge_root_lies_below_the_smallest_point(chi: float, rng: np.random.Generator) -> None:
    points = np.sort(rng.uniform(0.1, 20.0, 8))
    config = PointConfiguration.finite(points, marks=rng.standard_normal(8), first_offset=1)
    root = hard_edge_root(config, chi, 1)
    assert 0.0 < root < points[0]
    assert hard_edge_D(config, chi, root) == pytest.approx(0.0, abs=1e-8 * (1.0 + chi / root))


def test_psi_step_interlaces(bulk_window: PointConfiguration) -> None:
    new = psi_step(bulk_window, None, 0.2)
    assert new.kind == ProcessKind.sine
    assert new.offsets[0] == -new.offsets[-1]
    assert new.points[int(np.searchsorted(new.offsets, 0))] >= 0.0
    positions = np.searchsorted(bulk_window.points, new.points)
    assert np.all(np.diff(positions) == 1)


def test_psi_step_needs_a_bulk_window() -> None:
    with pytest.raises(SpecificationError):
        psi_step(_finite(), None, 0.0)


def test_t_step_interlaces(rng: np.random.Generator) -> None:
    points = np.cumsum(rng.uniform(0.5, 2.0, 15))
    config = PointConfiguration.finite(points, marks=rng.standard_normal(15), first_offset=1)
    new = t_step(config, None, 1.5)
    edges = np.concatenate([[0.0], points])
    np.testing.assert_array_equal(np.searchsorted(edges, new.points), np.arange(1, 16))


def test_phi_step_keeps_rows_normalized(bulk_window: PointConfiguration) -> None:
    assert bulk_window.marks is not None
    new = psi_step(bulk_window, None, 0.0)
    basis = phi_step(BasisState.initial(bulk_window), new, bulk_window, bulk_window.marks)
    np.testing.assert_allclose(basis.row_norms(), 1.0)
    assert basis.coefficients.shape == (new.size, bulk_window.size)
    np.testing.assert_allclose(basis.leakage, 0.0, atol=1e-12)


def test_hard_edge_phi_step(rng: np.random.Generator) -> None:
    points = np.cumsum(rng.uniform(0.5, 2.0, 10))
    marks = rng.standard_normal(10)
    config = PointConfiguration.finite(points, marks=marks, first_offset=1)
    new = t_step(config, None, 2.0)
    basis = hard_edge_phi_step(BasisState.initial(config), new, config, marks)
    np.testing.assert_allclose(basis.row_norms(), 1.0)


def test_phi_step_checks_sizes(bulk_window: PointConfiguration) -> None:
    new = psi_step(bulk_window, None, 0.0)
    with pytest.raises(SpecificationError):
        phi_step(BasisState.initial(new), new, bulk_window, np.ones(bulk_window.size))
