"""Closed-form limiting laws and deterministic constants.

Energies are in semicircle units (support [-2, 2]) for Wigner matrices and in units of T
for Wishart matrices (support [lambda_-, lambda_+] with lambda_pm = (1 +- sqrt q)^2).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.optimize
import scipy.stats
from minors_pydantic import AuxiliaryRegime, Side
from numpy.typing import NDArray

from .errors import DegenerateGapError, SpecificationError
from .secular import (
    PointConfiguration,
    hard_edge_root,
    inverse_branch,
    overlap_row,
    stieltjes_derivative,
)

logger = logging.getLogger(__name__)

QUANTILE_TOLERANCE = 1e-12
AUXILIARY_GAP = 1e-8


def _check_q(q: float) -> None:
    if not 0.0 < q <= 1.0:
        raise SpecificationError(f"q must lie in (0,1], got {q!r}")


def rho_sc(x: float) -> float:
    """Semicircle density sqrt(4 - x^2) / (2 pi), zero outside [-2, 2]."""
    if abs(x) >= 2.0:
        return 0.0
    return math.sqrt(4.0 - x * x) / (2.0 * math.pi)


def mp_edges(q: float) -> tuple[float, float]:
    """(lambda_-, lambda_+) = ((1 - sqrt q)^2, (1 + sqrt q)^2)."""
    _check_q(q)
    root = math.sqrt(q)
    return (1.0 - root) ** 2, (1.0 + root) ** 2


def rho_mp(x: float, q: float) -> float:
    """Marchenko-Pastur density of the eigenvalues of X^T X / T for q = N/T."""
    lower, upper = mp_edges(q)
    if not lower < x < upper:
        return 0.0
    return math.sqrt((upper - x) * (x - lower)) / (2.0 * math.pi * q * x)


def h_wigner(energy: float) -> float:
    """Level parameter of the Wigner bulk, -E / (2 sqrt(4 - E^2))."""
    if not -2.0 < energy < 2.0:
        raise SpecificationError("E must lie in (-2,2)")
    return -energy / (2.0 * math.sqrt(4.0 - energy * energy))


def _check_mp_bulk(energy: float, q: float) -> tuple[float, float]:
    lower, upper = mp_edges(q)
    if not lower < energy < upper:
        raise SpecificationError(f"E must lie in ({lower!r},{upper!r}) for q={q!r}")
    return lower, upper


def h_wishart_bulk(energy: float, q: float) -> float:
    """Level parameter of the Wishart bulk eigenvalue chain."""
    lower, upper = _check_mp_bulk(energy, q)
    return -q * (energy + q - 1.0) / (2.0 * math.sqrt((upper - energy) * (energy - lower)))


def h_overlap_wishart(energy: float, q: float, calibration: float = 1.0) -> float:
    """Level parameter of the Wishart bulk overlap law, in units of the (calibrated) rescaling.

    The points are ``calibration * 2 pi rho_MP(E) (lambda - E T)``. At calibration 1 this equals
    :func:`h_wishart_bulk`.
    """
    _check_mp_bulk(energy, q)
    if calibration <= 0:
        raise SpecificationError("calibration must be positive")
    return -(energy + q - 1.0) / (2.0 * energy) / (2.0 * math.pi * rho_mp(energy, q) * calibration)


def _check_pairwise(points: NDArray[np.float64]) -> NDArray[np.float64]:
    gaps = points[None, :] - points[:, None]
    off = ~np.eye(points.size, dtype=bool)
    if points.size > 1 and np.min(np.abs(gaps[off])) == 0.0:
        raise DegenerateGapError(0.0)
    return gaps


def edge_overlap_law(config: PointConfiguration) -> NDArray[Any]:
    """A_ij = g_i conj(g_j) / (alpha_j - alpha_i) with zero diagonal; skew-Hermitian exactly."""
    if config.marks is None:
        raise SpecificationError("the edge law needs a marked configuration")
    gaps = _check_pairwise(config.points)
    numerators = config.marks[:, None] * np.conj(config.marks)[None, :]
    np.fill_diagonal(gaps, 1.0)
    law: NDArray[Any] = numerators / gaps
    np.fill_diagonal(law, 0.0)
    return law


def soft_edge_constant(q: float, side: Side) -> float:
    """c_q = (1 + sqrt q)^{-1/3} at the right edge, (1 - sqrt q)^{-1/3} at the left edge."""
    _check_q(q)
    match side:
        case Side.right:
            return float((1.0 + math.sqrt(q)) ** (-1.0 / 3.0))
        case Side.left:
            if q >= 1.0:
                raise SpecificationError("the left soft edge needs q < 1")
            return float((1.0 - math.sqrt(q)) ** (-1.0 / 3.0))
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def wishart_soft_edge_overlap_law(config: PointConfiguration, q: float, side: Side) -> NDArray[Any]:
    law: NDArray[Any] = soft_edge_constant(q, side) * edge_overlap_law(config)
    return law


def bulk_overlap_row(config: PointConfiguration, h: float, u: int) -> NDArray[Any]:
    """Overlaps of the new point on branch ``u`` with every old point of the window.

    Entry v is conj(g_v) sqrt((S^{-1})'(h)_u) / (S^{-1}(h)_u - mu_v).
    """
    if config.marks is None:
        raise SpecificationError("the bulk law needs a marked configuration")
    z = inverse_branch(config, h, u)
    return overlap_row(config, z, 1.0 / stieltjes_derivative(config, z), config.marks)


def bulk_overlap_law(config: PointConfiguration, h: float, u: int, v: int) -> complex:
    return complex(bulk_overlap_row(config, h, u)[config.position(v)])


def hard_edge_overlap_row(config: PointConfiguration, chi: float, u: int) -> NDArray[Any]:
    """Overlaps of the u-th new hard-edge point (root of D on interval u) with the old window.

    Rows are normalized over the window by the explicit inverse-square-root factor.
    """
    if config.marks is None:
        raise SpecificationError("the hard-edge law needs a marked configuration")
    z = hard_edge_root(config, chi, u)
    numerators = config.marks * np.sqrt(config.points)
    norm = float(np.sum(np.abs(numerators) ** 2 / (z - config.points) ** 2))
    return overlap_row(config, z, 1.0 / norm, numerators)


def hard_edge_overlap_law(config: PointConfiguration, chi: float, u: int, v: int) -> complex:
    return complex(hard_edge_overlap_row(config, chi, u)[config.position(v)])


@dataclass(frozen=True)
class GapLawConstants:
    """Gamma law C x^{beta/2 - 1} e^{-beta x / 2} of a scaled edge increment."""

    normalization: float
    mean: float
    variance: float


def _check_beta(beta: int) -> None:
    if beta not in (1, 2):
        raise SpecificationError(f"beta must be 1 or 2, got {beta!r}")


def gap_law_constants(beta: int) -> GapLawConstants:
    _check_beta(beta)
    half = beta / 2.0
    return GapLawConstants(normalization=half**half / math.gamma(half), mean=1.0, variance=2.0 / beta)


def gap_law(beta: int) -> Any:
    """Frozen scipy Gamma(beta/2, scale 2/beta) distribution."""
    _check_beta(beta)
    return scipy.stats.gamma(beta / 2.0, scale=2.0 / beta)


def wishart_gap_scale(q: float, side: Side) -> float:
    """Signed factor turning a Wishart edge increment (new minus old) into a Gamma variable."""
    _check_q(q)
    root = math.sqrt(q)
    match side:
        case Side.right:
            return root / (1.0 + root)
        case Side.left:
            if q >= 1.0:
                raise SpecificationError("the left soft edge needs q < 1")
            return -root / (1.0 - root)
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def semicircle_cdf(x: float) -> float:
    if x <= -2.0:
        return 0.0
    if x >= 2.0:
        return 1.0
    return 0.5 + x * math.sqrt(4.0 - x * x) / (4.0 * math.pi) + math.asin(x / 2.0) / math.pi


def semicircle_quantile(y: float) -> float:
    """lambda(y) with int_{-inf}^{lambda(y)} rho_sc = y, for y in [0, 1]."""
    if not 0.0 <= y <= 1.0:
        raise SpecificationError(f"quantile level must lie in [0,1], got {y!r}")
    if y in (0.0, 1.0):
        return 4.0 * y - 2.0
    root: float = scipy.optimize.brentq(lambda x: semicircle_cdf(x) - y, -2.0, 2.0, xtol=QUANTILE_TOLERANCE)
    return root


@dataclass(frozen=True)
class AuxiliaryLimit:
    """Limiting value of N^{scale_exponent} times an overlap entry."""

    value: complex
    scale_exponent: float

    def scale(self, n: int) -> float:
        return float(n**self.scale_exponent)


def _interior_quantile(y: float) -> float:
    if not 0.0 < y < 1.0:
        raise SpecificationError(f"y must lie in (0,1), got {y!r}")
    return semicircle_quantile(y)


def _guarded(numerator: complex, denominator: float) -> complex:
    if abs(denominator) < AUXILIARY_GAP:
        raise DegenerateGapError(abs(denominator))
    return complex(numerator / denominator)


def auxiliary_regimes(
    kind: AuxiliaryRegime,
    *,
    y: float,
    y_other: float | None = None,
    g_i: complex = 1.0,
    g_j: complex = 1.0,
    derivative: float = 1.0,
    upper: bool = False,
) -> AuxiliaryLimit:
    """Limits of the overlap entries outside the local windows.

    ``edge_bulk``: edge index i against bulk index yN, scaled by N; ``upper`` uses the top edge.
    ``bulk_off``: bulk indices yN and y_other N, scaled by N; ``derivative`` is (S^{-1})'(h)_i.
    ``new_direction``: bulk index yN against the appended direction, scaled by sqrt N.
    """
    match kind:
        case AuxiliaryRegime.edge_bulk:
            edge = 2.0 if upper else -2.0
            return AuxiliaryLimit(_guarded(g_i * g_j.conjugate(), edge - _interior_quantile(y)), 1.0)
        case AuxiliaryRegime.bulk_off:
            if y_other is None:
                raise SpecificationError("bulk_off needs a second quantile level")
            gap = _interior_quantile(y_other) - _interior_quantile(y)
            return AuxiliaryLimit(_guarded(g_j.conjugate() * math.sqrt(derivative), gap), 1.0)
        case AuxiliaryRegime.new_direction:
            return AuxiliaryLimit(_guarded(math.sqrt(derivative), _interior_quantile(y)), 0.5)
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")
