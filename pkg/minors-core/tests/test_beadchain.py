from collections.abc import Callable

import numpy as np
import pytest
from minors_core.beadchain import ChainState, run_bulk_chain, run_hard_edge_chain, trajectory_rows
from minors_core.errors import SpecificationError
from minors_core.laws import h_wigner
from minors_core.limits import sample_bessel, sample_sine
from minors_core.secular import PointConfiguration
from minors_core.streams import RandomStream
from minors_pydantic import ProcessKind, ProcessSpec


def _sine(rng: np.random.Generator) -> PointConfiguration:
    spec = ProcessSpec(kind=ProcessKind.sine, energy=0.3, window=32, approximant_size=300)
    return sample_sine(spec, rng)


def test_bulk_chain(rng: np.random.Generator) -> None:
    initial = _sine(rng)
    trajectory = run_bulk_chain(initial, h_wigner(0.3), 3, rng)
    assert [state.step for state in trajectory] == [0, 1, 2, 3]
    assert trajectory[0].transition is None
    np.testing.assert_array_equal(trajectory[0].config.marks, initial.marks)
    for before, after in zip(trajectory, trajectory[1:], strict=False):
        transition = after.transition
        assert transition is not None
        np.testing.assert_allclose(np.sum(np.abs(transition.entries) ** 2, axis=1), 1.0)
        np.testing.assert_allclose(after.basis.row_norms(), 1.0)
        assert after.config.size <= before.config.size
    first = trajectory[1].transition
    assert first is not None
    assert first.branch_row(-1).shape == (initial.size,)


def test_chain_product_is_square(rng: np.random.Generator) -> None:
    final = run_bulk_chain(_sine(rng), 0.0, 2, rng)[-1]
    product = final.product(4)
    assert product.shape == (9, 9)
    np.testing.assert_array_equal(final.central_offsets(4), np.arange(-4, 5))


def test_chain_needs_steps(rng: np.random.Generator) -> None:
    with pytest.raises(SpecificationError):
        run_bulk_chain(_sine(rng), 0.0, 0, rng)


def test_hard_edge_chain(rng: np.random.Generator) -> None:
    initial = sample_bessel(ProcessSpec(kind=ProcessKind.bessel, alpha=4, window=10, approximant_size=100), rng)
    trajectory = run_hard_edge_chain(4, 2, 10, rng, initial=initial)
    assert len(trajectory) == 3
    for before, after in zip(trajectory, trajectory[1:], strict=False):
        edges = np.concatenate([[0.0], before.config.points])
        np.testing.assert_array_equal(np.searchsorted(edges, after.config.points), np.arange(1, 11))
        assert before.parameter > 0.0
    rows = trajectory_rows(trajectory)
    assert len(rows) == 30
    assert rows[0][:2] == (0, 1)
    assert np.isnan(rows[-1][3])


def test_hard_edge_chain_needs_alpha_above_steps(rng: np.random.Generator) -> None:
    with pytest.raises(SpecificationError):
        run_hard_edge_chain(2, 2, 10, rng)


def _bulk_trajectory(seed: int, steps: int) -> list[ChainState]:
    rng = RandomStream(seed).generator()
    return run_bulk_chain(_sine(rng), h_wigner(0.3), steps, rng)


def _hard_edge_trajectory(seed: int, steps: int) -> list[ChainState]:
    rng = RandomStream(seed).generator()
    initial = sample_bessel(ProcessSpec(kind=ProcessKind.bessel, alpha=4, window=10, approximant_size=100), rng)
    return run_hard_edge_chain(4, steps, 10, rng, initial=initial)


@pytest.mark.parametrize("chain", [_bulk_trajectory, _hard_edge_trajectory])
def test_chain_is_determined_by_seed_and_steps(chain: Callable[[int, int], list[ChainState]]) -> None:
    first, second = chain(11, 2), chain(11, 2)
    assert len(first) == len(second) == 3
    for a, b in zip(first, second, strict=True):
        np.testing.assert_array_equal(a.config.points, b.config.points)
        np.testing.assert_array_equal(a.basis.coefficients, b.basis.coefficients)
        assert a.parameter == b.parameter
    assert not np.array_equal(chain(12, 2)[-1].config.points, first[-1].config.points)
