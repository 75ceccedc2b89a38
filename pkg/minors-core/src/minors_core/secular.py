"""Secular-equation machinery on marked point configurations.

Offsets label the points of a configuration. A bulk (sine) window has offsets -M..M with the
anchor at 0; edge and hard-edge windows have offsets 1..M counted from the edge. Branch ``u``
of the inverse Stieltjes transform lives on the interval between the points at offsets ``u``
and ``u + 1``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
from minors_pydantic import ProcessKind
from numpy.typing import NDArray

from .errors import DegenerateGapError, PoleEvaluationError, SpecificationError, WindowError
from .rootfinding import RationalFunction, solve_intervals
from .warns import WindowTruncationWarning

logger = logging.getLogger(__name__)

DEGENERATE_GAP = 1e-14
INVERSE_TOLERANCE = 1e-14


@dataclass(frozen=True)
class PointConfiguration:
    """Ascending points labelled by integer offsets, optionally carrying i.i.d. marks.

    ``density`` is the mean number of points per unit length around the anchor. It is set
    for configurations sampled from a bulk process and drives the tail estimates; finite
    configurations leave it unset and are treated exactly.
    """

    points: NDArray[np.float64]
    offsets: NDArray[np.intp]
    marks: NDArray[Any] | None = None
    kind: ProcessKind | None = None
    beta: int = 1
    density: float | None = None

    def __post_init__(self) -> None:
        if self.points.shape != self.offsets.shape:
            raise SpecificationError("points and offsets must have the same length")
        if np.any(np.diff(self.points) <= 0) or np.any(np.diff(self.offsets) != 1):
            raise SpecificationError("points must be strictly ascending with consecutive offsets")
        if self.marks is not None and (self.marks.shape != self.points.shape or not np.all(np.isfinite(self.marks))):
            raise SpecificationError("marks must be finite, one per point")
        if self.kind == ProcessKind.sine and self.size and self.offsets[0] != -self.offsets[-1]:
            raise SpecificationError("a bulk window must be symmetric around offset 0")

    @classmethod
    def finite(
        cls, points: Any, marks: Any = None, *, first_offset: int = 0, beta: int = 1
    ) -> PointConfiguration:
        """A plain configuration without tails, offsets counted from ``first_offset``."""
        values = np.asarray(points, dtype=np.float64)
        return cls(
            points=values,
            offsets=np.arange(first_offset, first_offset + values.size, dtype=np.intp),
            marks=None if marks is None else np.asarray(marks),
            beta=beta,
        )

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def half_width(self) -> int:
        """Points available on the short side of the anchor (bulk), or the window length."""
        if self.kind == ProcessKind.sine:
            return int(self.offsets[-1])
        return self.size

    @property
    def weights(self) -> NDArray[np.float64]:
        """|g_j|^2"""
        if self.marks is None:
            raise SpecificationError("configuration carries no marks")
        return np.abs(self.marks) ** 2

    def position(self, offset: int) -> int:
        index = offset - int(self.offsets[0])
        if not 0 <= index < self.size:
            raise SpecificationError(f"offset {offset} outside window [{self.offsets[0]}, {self.offsets[-1]}]")
        return index

    def at(self, offset: int) -> float:
        return float(self.points[self.position(offset)])

    def with_marks(self, marks: NDArray[Any]) -> PointConfiguration:
        return replace(self, marks=marks)

    def rescaled(self, factor: float) -> PointConfiguration:
        """Points multiplied by ``factor`` (> 0); the density follows."""
        density = None if self.density is None else self.density / factor
        return replace(self, points=self.points * factor, density=density)

    def recentered(self) -> PointConfiguration:
        """Relabels offsets so the smallest nonnegative point sits at offset 0."""
        anchor = int(np.searchsorted(self.points, 0.0, side="left"))
        offsets = np.arange(-anchor, self.size - anchor, dtype=np.intp)
        return PointConfiguration(self.points, offsets, self.marks, None, self.beta, self.density)

    def trimmed(self, half_width: int) -> PointConfiguration:
        """Keeps offsets -half_width..half_width."""
        keep = np.abs(self.offsets) <= half_width
        marks = None if self.marks is None else self.marks[keep]
        return replace(self, points=self.points[keep], offsets=self.offsets[keep], marks=marks)


def _check_pole(config: PointConfiguration, z: float) -> None:
    if np.any(config.points == z):
        raise PoleEvaluationError(z)


def _paired_sum(terms: NDArray[np.float64], offsets: NDArray[np.intp]) -> float:
    """Sums offsets j and -j together first, realizing principal-value convergence."""
    if offsets.size == 0 or offsets[0] != -offsets[-1]:
        return float(np.sum(terms))
    center = int(-offsets[0])
    pairs = terms[:center][::-1] + terms[center + 1 :]
    return float(terms[center] + np.sum(pairs))


def stieltjes_S(config: PointConfiguration, z: float) -> float:
    """S(z) = sum_j |g_j|^2 / (mu_j - z) over the window, paired symmetrically.

    Raises:
        PoleEvaluationError: If ``z`` is a point of the configuration.
    """
    _check_pole(config, z)
    return _paired_sum(config.weights / (config.points - z), config.offsets)


def _tail_distances(config: PointConfiguration, z: float) -> tuple[float, float]:
    return float(config.points[-1] - z), float(z - config.points[0])


def stieltjes_derivative(config: PointConfiguration, z: float, *, tail: bool = True) -> float:
    """S'(z) over the window, plus rho (1/(mu_max - z) + 1/(z - mu_min)) when the config has a density."""
    _check_pole(config, z)
    value = float(np.sum(config.weights / (config.points - z) ** 2))
    if tail and config.density is not None:
        above, below = _tail_distances(config, z)
        value += config.density * (1.0 / above + 1.0 / below)
    return value


def stieltjes_tail_bound(config: PointConfiguration, z: float) -> float:
    """Bound on what the window leaves out of S(z): mean principal-value tail plus three deviations."""
    if config.kind == ProcessKind.bessel:
        return 1.0 / (math.pi * math.sqrt(float(config.points[-1])))
    if config.density is None:
        return 0.0
    above, below = _tail_distances(config, z)
    mean = config.density * abs(math.log(below / above))
    deviation = math.sqrt((2.0 / config.beta) * config.density * (1.0 / above + 1.0 / below))
    return mean + 3.0 * deviation


def _check_branch(config: PointConfiguration, branch: int) -> None:
    if config.kind != ProcessKind.sine:
        return
    window = config.half_width
    if 4 * abs(branch) > window or 4 * abs(branch + 1) > window:
        raise WindowError(branch, window, 4 * (max(abs(branch), abs(branch + 1)) + 1))


def inverse_branch(config: PointConfiguration, h: float, u: int, *, tail_tolerance: float | None = None) -> float:
    """The unique z in (mu_u, mu_{u+1}) with S(z) = h.

    With ``tail_tolerance`` set, warns when the window tail bound at the root exceeds it.

    Raises:
        WindowError: If a bulk branch lies within M/4 points of the window boundary.
        SpecificationError: If offsets ``u`` or ``u + 1`` are outside the window.
    """
    _check_branch(config, u)
    index = config.position(u)
    config.position(u + 1)
    function = RationalFunction(poles=config.points, weights=config.weights, intercept=-h)
    roots = solve_intervals(function, [index], tolerance=INVERSE_TOLERANCE)
    root = float(roots.values[0])
    if tail_tolerance is not None:
        bound = stieltjes_tail_bound(config, root)
        if bound > tail_tolerance:
            warnings.warn(WindowTruncationWarning(bound, tail_tolerance), stacklevel=2)
    return root


def inverse_branch_derivative(config: PointConfiguration, h: float, u: int) -> float:
    """(S^{-1})'(h) on branch ``u``, i.e. 1 / S'(S^{-1}(h)_u)."""
    return 1.0 / stieltjes_derivative(config, inverse_branch(config, h, u))


def overlap_row(config: PointConfiguration, z: float, derivative: float, numerators: NDArray[Any]) -> NDArray[Any]:
    """v -> conj(numerator_v) sqrt(derivative) / (z - mu_v), the common shape of every overlap law."""
    gaps = z - config.points
    if np.any(np.abs(gaps) < DEGENERATE_GAP):
        raise DegenerateGapError(float(np.min(np.abs(gaps))))
    row: NDArray[Any] = np.conj(numerators) * math.sqrt(derivative) / gaps
    return row


def hard_edge_function(config: PointConfiguration, chi: float) -> RationalFunction:
    poles = np.concatenate([[0.0], config.points])
    return RationalFunction(poles=poles, weights=np.concatenate([[chi], config.weights]))


def hard_edge_D(config: PointConfiguration, chi: float, z: float) -> float:
    """D(z) = sum_j g_j^2 / (xi_j - z) - chi / z.

    Raises:
        PoleEvaluationError: If ``z`` is 0 or a point of the configuration.
    """
    _check_pole(config, z)
    if z == 0:
        raise PoleEvaluationError(z)
    return float(np.sum(config.weights / (config.points - z)) - chi / z)


def hard_edge_root(config: PointConfiguration, chi: float, u: int) -> float:
    """Root of D on interval ``u`` (1-based): (0, xi_1) for u = 1, (xi_{u-1}, xi_u) after."""
    if chi <= 0:
        raise SpecificationError("chi must be positive")
    if not 1 <= u <= config.size:
        raise SpecificationError(f"hard-edge interval {u} outside 1..{config.size}")
    return float(solve_intervals(hard_edge_function(config, chi), [u - 1]).values[0])


def psi_step(config: PointConfiguration, marks: NDArray[Any] | None, h: float) -> PointConfiguration:
    """One step of the bulk eigenvalue chain: every interior root of S(z) = h.

    The new point in (mu_{k-1}, mu_k) gets offset k; the result is re-centered at its
    smallest nonnegative point and trimmed back to a symmetric window.
    """
    if config.kind != ProcessKind.sine:
        raise SpecificationError("psi_step needs a bulk configuration")
    marked = config if marks is None else config.with_marks(marks)
    function = RationalFunction(poles=marked.points, weights=marked.weights, intercept=-h)
    roots = solve_intervals(function, np.arange(config.size - 1), tolerance=INVERSE_TOLERANCE)
    stepped = PointConfiguration(
        points=roots.values, offsets=config.offsets[1:].copy(), beta=config.beta, density=config.density
    ).recentered()
    half_width = min(-int(stepped.offsets[0]), int(stepped.offsets[-1]))
    logger.debug("psi step: %d points, half-width %d", stepped.size, half_width)
    return replace(stepped.trimmed(half_width), kind=ProcessKind.sine)


def t_step(config: PointConfiguration, marks: NDArray[Any] | None, chi: float) -> PointConfiguration:
    """One step of the hard-edge chain: the roots of D, one in each of (0, xi_1), (xi_1, xi_2), ..."""
    if chi <= 0:
        raise SpecificationError("chi must be positive")
    if config.size == 0 or config.points[0] <= 0:
        raise SpecificationError("t_step needs positive points")
    marked = config if marks is None else config.with_marks(marks)
    roots = solve_intervals(hard_edge_function(marked, chi), np.arange(config.size))
    return PointConfiguration(
        points=roots.values, offsets=config.offsets.copy(), kind=config.kind, beta=config.beta, density=config.density
    )


@dataclass(frozen=True)
class BasisState:
    """Coefficients of the current eigenvectors in the step-0 window basis.

    Row r belongs to the point at ``row_offsets[r]`` of the current configuration, column c
    to the point at ``column_offsets[c]`` of the initial one. ``leakage[r]`` is the squared
    mass row r lost to window truncation before it was renormalized.
    """

    coefficients: NDArray[Any]
    row_offsets: NDArray[np.intp]
    column_offsets: NDArray[np.intp]
    leakage: NDArray[np.float64]

    @classmethod
    def initial(cls, config: PointConfiguration) -> BasisState:
        return cls(
            coefficients=np.eye(config.size),
            row_offsets=config.offsets.copy(),
            column_offsets=config.offsets.copy(),
            leakage=np.zeros(config.size),
        )

    def row_norms(self) -> NDArray[np.float64]:
        return np.sqrt(np.sum(np.abs(self.coefficients) ** 2, axis=1))

    def entry(self, row_offset: int, column_offset: int) -> Any:
        row = int(np.searchsorted(self.row_offsets, row_offset))
        return self.coefficients[row, int(np.searchsorted(self.column_offsets, column_offset))]

    def block(self, offsets: NDArray[np.intp] | list[int]) -> NDArray[Any]:
        """Square block of coefficients over the given offsets (rows current, columns initial)."""
        rows = np.searchsorted(self.row_offsets, offsets)
        columns = np.searchsorted(self.column_offsets, offsets)
        return self.coefficients[np.ix_(rows, columns)]


def _transition(new: PointConfiguration, old: PointConfiguration, numerators: NDArray[Any]) -> NDArray[Any]:
    gaps = new.points[:, None] - old.points[None, :]
    smallest = float(np.min(np.abs(gaps), initial=np.inf))
    if smallest < DEGENERATE_GAP:
        raise DegenerateGapError(smallest)
    raw = np.conj(numerators)[None, :] / gaps
    norms = np.sqrt(np.sum(np.abs(raw) ** 2, axis=1))
    return raw / norms[:, None]


def _advance(basis: BasisState, transition: NDArray[Any], new: PointConfiguration) -> BasisState:
    coefficients = transition @ basis.coefficients
    norms = np.sqrt(np.sum(np.abs(coefficients) ** 2, axis=1))
    return BasisState(
        coefficients=coefficients / norms[:, None],
        row_offsets=new.offsets.copy(),
        column_offsets=basis.column_offsets,
        leakage=1.0 - norms**2,
    )


def phi_step(
    basis: BasisState, new: PointConfiguration, old: PointConfiguration, marks: NDArray[Any]
) -> BasisState:
    """One step of the bulk eigenvector chain.

    Row i of the transition is upsilon_i conj(g_j) / (theta'_i - theta_j) over the old window,
    with upsilon_i normalizing it; the new basis is the transition applied to the old one.

    Raises:
        DegenerateGapError: If a new point is within 1e-14 of an old one.
    """
    if basis.coefficients.shape[0] != old.size or marks.shape != old.points.shape:
        raise SpecificationError("basis, old configuration and marks must have matching sizes")
    return _advance(basis, _transition(new, old, marks), new)


def hard_edge_phi_step(
    basis: BasisState, new: PointConfiguration, old: PointConfiguration, marks: NDArray[Any]
) -> BasisState:
    """Hard-edge counterpart of :func:`phi_step` with numerators g_j sqrt(xi_j)."""
    if basis.coefficients.shape[0] != old.size or marks.shape != old.points.shape:
        raise SpecificationError("basis, old configuration and marks must have matching sizes")
    return _advance(basis, _transition(new, old, marks * np.sqrt(old.points)), new)
