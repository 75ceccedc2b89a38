import numpy as np
import pytest
from minors_core.errors import SpecificationError
from minors_core.montecarlo import histogram, ks_statistic, moments, shared_edges, statistics, top_bin_mass


def test_ks_identical_samples() -> None:
    sample = np.linspace(0.0, 1.0, 50)
    assert ks_statistic(sample, sample) == 0.0


def test_ks_disjoint_samples() -> None:
    assert ks_statistic([0.0, 0.1, 0.2], [5.0, 6.0]) == 1.0


def test_ks_needs_samples() -> None:
    with pytest.raises(SpecificationError):
        ks_statistic([], [1.0])


def test_histogram_densities_integrate_to_one(rng: np.random.Generator) -> None:
    shared = histogram(rng.standard_normal(500), rng.standard_normal(300) + 0.5, bins=12)
    widths = np.diff(shared.edges)
    assert len(shared.edges) == 13
    assert float(np.sum(np.array(shared.empirical) * widths)) == pytest.approx(1.0)
    assert float(np.sum(np.array(shared.theoretical) * widths)) == pytest.approx(1.0)


def test_constant_samples_get_one_bin() -> None:
    np.testing.assert_array_equal(shared_edges(np.ones(3), np.ones(2)), [0.5, 1.5])


def test_moments() -> None:
    summary = moments(np.array([1.0, 2.0, 3.0, 4.0]))
    assert summary.count == 4
    assert summary.mean == 2.5
    assert summary.variance == pytest.approx(5.0 / 3.0)
    assert moments(np.empty(0)).count == 0


def test_top_bin_mass() -> None:
    assert top_bin_mass(np.array([0.1, 0.2, 0.9, 1.0]), [0.0, 0.5, 1.0]) == 0.5


def test_statistics_exports_only_statistics() -> None:
    exported = ["histogram", "ks_statistic", "moments", "shared_edges", "top_bin_mass", "unit_histogram"]
    assert statistics.__all__ == exported
    assert not hasattr(statistics, "anchor_index")
