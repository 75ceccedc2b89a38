"""Samplers for the sine, Airy and Bessel point processes with attached Gaussian marks.

Each process is approximated by the spectrum of a finite matrix. The default ``tridiagonal``
approximant uses the beta-Hermite tridiagonal model (and the beta-Laguerre bidiagonal model
for Bessel), whose spectra have the same law as the dense Gaussian ensembles; ``dense``
samples those ensembles directly.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import Any

import numpy as np
import scipy.linalg
from minors_pydantic import Approximant, EnsembleSpec, ProcessKind, ProcessSpec, Side
from numpy.typing import NDArray

from .ensembles import sample_wigner, sample_wishart
from .errors import ConvergenceError, SpecificationError
from .secular import PointConfiguration
from .spectral import anchor_index, eig_values
from .warns import ApproximantWarning

logger = logging.getLogger(__name__)

SINE_DENSITY = 1.0 / (2.0 * math.pi)
"""Points per unit length of the rescaled bulk process (mean spacing 2 pi)."""


def gaussian_marks(count: int, beta: int, rng: np.random.Generator) -> NDArray[Any]:
    """Real N(0,1) marks for beta = 1; complex marks with E|g|^2 = 1 for beta = 2."""
    if beta == 1:
        return rng.standard_normal(count)
    return (rng.standard_normal(count) + 1j * rng.standard_normal(count)) / math.sqrt(2.0)


def hermite_tridiagonal(n: int, beta: int, rng: np.random.Generator) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Diagonal and off-diagonal of the beta-Hermite model.

    The diagonal is N(0, 2/beta) and the k-th off-diagonal entry chi_{beta(n-k)}/sqrt(beta), so
    the spectrum has the law of a Wigner matrix with unit-variance off-diagonal entries.
    """
    diagonal = rng.standard_normal(n) * math.sqrt(2.0 / beta)
    degrees = beta * np.arange(n - 1, 0, -1)
    off = np.sqrt(rng.chisquare(degrees)) / math.sqrt(beta)
    return diagonal, off


def laguerre_bidiagonal(
    n: int, t: int, rng: np.random.Generator
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Lower bidiagonal B (real case) whose B B^T has the spectrum of X^T X for a T x N Gaussian X."""
    diagonal = np.sqrt(rng.chisquare(np.arange(t, t - n, -1)))
    sub = np.sqrt(rng.chisquare(np.arange(n - 1, 0, -1)))
    return diagonal, sub


def _tridiagonal_values(
    diagonal: NDArray[np.float64], off: NDArray[np.float64], subset: tuple[int, int] | None = None
) -> NDArray[np.float64]:
    select, select_range = ("a", None) if subset is None else ("i", subset)
    try:
        values: NDArray[np.float64] = scipy.linalg.eigh_tridiagonal(
            diagonal, off, eigvals_only=True, select=select, select_range=select_range
        )
    except (np.linalg.LinAlgError, ValueError) as error:
        raise ConvergenceError("tridiagonal eigensolver failed", {"size": diagonal.size}) from error
    return values


def _check_share(spec: ProcessSpec) -> None:
    if 2 * spec.points_needed > spec.size:
        warnings.warn(ApproximantWarning(spec.points_needed, spec.size), stacklevel=3)


def _require(spec: ProcessSpec, kind: ProcessKind) -> None:
    if spec.kind != kind:
        raise SpecificationError(f"expected a {kind} process, got {spec.kind}")


def _gaussian_spectrum(
    spec: ProcessSpec, rng: np.random.Generator, subset: tuple[int, int] | None = None
) -> NDArray[np.float64]:
    match spec.approximant:
        case Approximant.tridiagonal:
            return _tridiagonal_values(*hermite_tridiagonal(spec.size, spec.beta, rng), subset)
        case Approximant.dense:
            ensemble = EnsembleSpec(beta=spec.beta, n=spec.size, goe_diagonal=spec.beta == 1)
            return eig_values(sample_wigner(ensemble, rng), subset)
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def sample_sine(spec: ProcessSpec, rng: np.random.Generator) -> PointConfiguration:
    """2M+1 points of the bulk process at ``spec.energy``, offsets -M..M, mean spacing 2 pi.

    Raises:
        SpecificationError: If the anchor sits fewer than M eigenvalues from either end.
    """
    _require(spec, ProcessKind.sine)
    _check_share(spec)
    n, half_width, energy = spec.size, spec.half_width, spec.energy
    values = _gaussian_spectrum(spec, rng)
    anchor = anchor_index(values, energy * math.sqrt(n))
    if anchor - half_width < 0 or anchor + half_width >= n:
        raise SpecificationError(f"window of {2 * half_width + 1} exceeds the bulk points around index {anchor}")
    window = values[anchor - half_width : anchor + half_width + 1]
    points = math.sqrt(4.0 - energy**2) * math.sqrt(n) * (window - energy * math.sqrt(n))
    return PointConfiguration(
        points=points,
        offsets=np.arange(-half_width, half_width + 1, dtype=np.intp),
        marks=gaussian_marks(points.size, spec.beta, rng),
        kind=ProcessKind.sine,
        beta=spec.beta,
        density=SINE_DENSITY,
    )


def sample_airy(spec: ProcessSpec, rng: np.random.Generator) -> PointConfiguration:
    """The l points nearest the chosen edge, rescaled by n^{1/6} and oriented to ascend from the edge."""
    _require(spec, ProcessKind.airy)
    _check_share(spec)
    n, count = spec.size, spec.half_width
    scale = n ** (1.0 / 6.0)
    match spec.side:
        case Side.left:
            points = scale * (_gaussian_spectrum(spec, rng, (0, count - 1)) + 2.0 * math.sqrt(n))
        case Side.right:
            points = -scale * (_gaussian_spectrum(spec, rng, (n - count, n - 1))[::-1] - 2.0 * math.sqrt(n))
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")
    return PointConfiguration(
        points=np.ascontiguousarray(points),
        offsets=np.arange(1, count + 1, dtype=np.intp),
        marks=gaussian_marks(count, spec.beta, rng),
        kind=ProcessKind.airy,
        beta=spec.beta,
    )


def _smallest_gram_values(spec: ProcessSpec, rng: np.random.Generator) -> NDArray[np.float64]:
    n, count = spec.size, spec.half_width
    t = n + spec.alpha
    match spec.approximant:
        case Approximant.tridiagonal:
            # singular values of B are the positive eigenvalues of the Golub-Kahan matrix
            diagonal, sub = laguerre_bidiagonal(n, t, rng)
            off = np.empty(2 * n - 1)
            off[0::2], off[1::2] = diagonal, sub
            singular = _tridiagonal_values(np.zeros(2 * n), off, (n, n + count - 1))
            return singular**2
        case Approximant.dense:
            return eig_values(sample_wishart(EnsembleSpec(n=n, t=t), rng).w, (0, count - 1))
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def sample_bessel(spec: ProcessSpec, rng: np.random.Generator) -> PointConfiguration:
    """The smallest M points of 4N spec(X^T X) with T = N + alpha; offsets 1..M."""
    _require(spec, ProcessKind.bessel)
    _check_share(spec)
    points = 4.0 * spec.size * _smallest_gram_values(spec, rng)
    if points[0] <= 0:
        raise ConvergenceError("hard-edge approximant produced a nonpositive point", {"smallest": float(points[0])})
    logger.debug("bessel window of %d points, largest %.3f", points.size, points[-1])
    return PointConfiguration(
        points=points,
        offsets=np.arange(1, points.size + 1, dtype=np.intp),
        marks=gaussian_marks(points.size, 1, rng),
        kind=ProcessKind.bessel,
    )


def sample_process(spec: ProcessSpec, rng: np.random.Generator) -> PointConfiguration:
    match spec.kind:
        case ProcessKind.sine:
            return sample_sine(spec, rng)
        case ProcessKind.airy:
            return sample_airy(spec, rng)
        case ProcessKind.bessel:
            return sample_bessel(spec, rng)
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")
