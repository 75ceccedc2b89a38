from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import scipy.stats
from minors_pydantic import Histogram, Moments
from numpy.typing import NDArray

from ..errors import SpecificationError

__all__ = ["histogram", "ks_statistic", "moments", "shared_edges", "top_bin_mass", "unit_histogram"]


def _nonempty(samples: Sequence[float] | NDArray[np.float64], name: str) -> NDArray[np.float64]:
    values = np.asarray(samples, dtype=np.float64)
    if values.size == 0:
        raise SpecificationError(f"{name} sample is empty")
    return values


def ks_statistic(a: Sequence[float] | NDArray[np.float64], b: Sequence[float] | NDArray[np.float64]) -> float:
    """Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.

    Raises:
        SpecificationError: If either sample is empty.
    """
    first, second = _nonempty(a, "first"), _nonempty(b, "second")
    return float(scipy.stats.ks_2samp(first, second).statistic)


def shared_edges(
    empirical: NDArray[np.float64], theoretical: NDArray[np.float64], bins: int | None = None
) -> NDArray[np.float64]:
    """Common bin edges for both samples, Freedman-Diaconis on the pooled sample unless ``bins`` is set."""
    pooled = np.concatenate([_nonempty(empirical, "empirical"), _nonempty(theoretical, "theoretical")])
    low, high = float(pooled.min()), float(pooled.max())
    if low == high:
        return np.array([low - 0.5, high + 0.5])
    edges: NDArray[np.float64] = np.histogram_bin_edges(pooled, bins="fd" if bins is None else bins)
    return edges


def unit_histogram(samples: NDArray[np.float64], edges: NDArray[np.float64]) -> list[float]:
    """Densities on ``edges`` that integrate to one."""
    densities, _ = np.histogram(samples, bins=edges, density=True)
    return [float(d) for d in densities]


def histogram(empirical: NDArray[np.float64], theoretical: NDArray[np.float64], bins: int | None = None) -> Histogram:
    edges = shared_edges(empirical, theoretical, bins)
    return Histogram(
        edges=[float(e) for e in edges],
        empirical=unit_histogram(empirical, edges),
        theoretical=unit_histogram(theoretical, edges),
    )


def top_bin_mass(samples: NDArray[np.float64], edges: Sequence[float]) -> float:
    """Fraction of ``samples`` falling in the last bin."""
    if samples.size == 0:
        return 0.0
    return float(np.count_nonzero(samples >= edges[-2]) / samples.size)


def moments(samples: NDArray[np.float64]) -> Moments:
    """Count, mean and unbiased variance with compensated summation."""
    count = int(samples.size)
    if count == 0:
        return Moments(count=0, mean=0.0, variance=0.0)
    values = [float(v) for v in samples]
    mean = math.fsum(values) / count
    variance = math.fsum((v - mean) ** 2 for v in values) / (count - 1) if count > 1 else 0.0
    return Moments(count=count, mean=mean, variance=variance)
