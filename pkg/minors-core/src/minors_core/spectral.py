"""Dense and arrowhead eigensolvers, overlap matrices and the finite-N identities.

Inner products are conjugate-linear in the first argument, ``<a, b> = a^H b``. Eigenvector
coordinates are therefore ``g_j = u_j^H g`` and overlaps ``Omega_ij = u_i'^H u_j`` with the
smaller basis embedded by appending a zero coordinate.
"""

from __future__ import annotations

import logging
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .ensembles import MinorExtension, eigen_coordinates
from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    PoleEvaluationError,
    SpecificationError,
)
from .rootfinding import LEFT_EXTERIOR, RationalFunction, SecularRoots, solve_intervals
from .warns import MergedPolesWarning

logger = logging.getLogger(__name__)

DEFLATION_THRESHOLD = 1e-24
"""Relative border weight below which a pole is an eigenvalue of the bordered matrix."""

MERGE_THRESHOLD = 1e-13
"""Relative pole gap below which two poles are merged before solving."""

RATIO_FILTER = 1e-4
"""Overlaps smaller than this fraction of their row maximum are left out of ratio checks."""


@dataclass(frozen=True)
class SpectralData:
    """Ascending eigenvalues with eigenvectors in the columns."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[Any]

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    @classmethod
    def identity(cls, eigenvalues: NDArray[np.float64]) -> SpectralData:
        """Spectral data of a diagonal matrix, i.e. the pole basis of an arrowhead problem."""
        return cls(eigenvalues=np.asarray(eigenvalues, dtype=np.float64), eigenvectors=np.eye(eigenvalues.size))

    def orthogonality_error(self) -> float:
        gram = self.eigenvectors.conj().T @ self.eigenvectors
        return float(np.max(np.abs(gram - np.eye(self.dim)), initial=0.0))

    def residual(self, h: NDArray[Any]) -> float:
        """max |H U - U Lambda| relative to max(1, |H|_max)."""
        error = h @ self.eigenvectors - self.eigenvectors * self.eigenvalues[None, :]
        scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
        return float(np.max(np.abs(error), initial=0.0)) / scale


def _diagnostics(h: NDArray[Any]) -> dict[str, Any]:
    finite = bool(np.all(np.isfinite(h)))
    return {
        "size": h.shape[0],
        "finite": finite,
        "frobenius_norm": float(np.linalg.norm(h)) if finite else float("nan"),
        "asymmetry": float(np.max(np.abs(h - h.conj().T), initial=0.0)) if finite else float("nan"),
    }


def eig_dense(h: NDArray[Any]) -> SpectralData:
    """Full eigendecomposition of a symmetric or Hermitian matrix.

    Raises:
        ConvergenceError: If LAPACK does not converge or the matrix is not finite.
    """
    try:
        values, vectors = scipy.linalg.eigh(h, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise ConvergenceError("dense eigensolver failed", _diagnostics(h)) from error
    return SpectralData(eigenvalues=values, eigenvectors=vectors)


def eig_values(h: NDArray[Any], subset: tuple[int, int] | None = None) -> NDArray[np.float64]:
    """Ascending eigenvalues, optionally only those with (0-based, inclusive) indices in ``subset``."""
    try:
        values: NDArray[np.float64] = scipy.linalg.eigh(h, eigvals_only=True, subset_by_index=subset)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise ConvergenceError("dense eigensolver failed", _diagnostics(h)) from error
    return values


def anchor_index(eigenvalues: NDArray[np.float64], threshold: float) -> int:
    """Smallest index whose (ascending) eigenvalue is at least ``threshold``.

    >>> anchor_index(np.array([1.0, 2.0, 3.0]), 2.5)
    2

    Raises:
        SpecificationError: If every eigenvalue is below ``threshold``.
    """
    index = int(np.searchsorted(eigenvalues, threshold, side="left"))
    if index == eigenvalues.size:
        raise SpecificationError(f"threshold {threshold!r} exceeds the largest eigenvalue")
    return index


class ArrowheadMode(StrEnum):
    wigner = "wigner"
    wishart = "wishart"


@dataclass(frozen=True)
class ArrowheadProblem:
    """One-step extension expressed in the eigenbasis of the smaller matrix.

    ``coordinates`` are g_j = <u_j, g> (Wigner) or <v_j, g> with v_j = X u_j / sqrt(lambda_j)
    (Wishart). In Wigner mode the bordered matrix is [[diag(poles), g], [g^H, corner]]; in
    Wishart mode it is [[diag(poles), sqrt(poles) g], [., |g|^2 + gamma]].
    """

    poles: NDArray[np.float64]
    coordinates: NDArray[Any]
    corner: float = 0.0
    gamma: float | None = None
    mode: ArrowheadMode = ArrowheadMode.wigner

    def __post_init__(self) -> None:
        if self.coordinates.shape != self.poles.shape:
            raise DimensionMismatchError("arrowhead coordinates", self.poles.size, self.coordinates.size)
        if np.any(np.diff(self.poles) < 0):
            raise SpecificationError("arrowhead poles must be ascending")
        if self.mode == ArrowheadMode.wishart:
            if self.gamma is None or self.gamma < 0:
                raise SpecificationError("Wishart mode needs a nonnegative gamma")
            if self.poles.size and self.poles[0] <= 0:
                raise SpecificationError("Wishart mode needs positive poles")

    @property
    def weights(self) -> NDArray[np.float64]:
        """|g_j|^2"""
        return np.abs(self.coordinates) ** 2

    @property
    def border(self) -> NDArray[Any]:
        """Last column of the bordered matrix in the pole basis."""
        if self.mode == ArrowheadMode.wishart:
            return np.sqrt(self.poles) * self.coordinates
        return self.coordinates

    @property
    def corner_entry(self) -> float:
        if self.mode == ArrowheadMode.wishart:
            return float(self.weights.sum()) + float(self.gamma or 0.0)
        return self.corner

    def bordered(self) -> NDArray[Any]:
        """The explicit (N+1) x (N+1) bordered matrix in the pole basis."""
        n = self.poles.size
        out = np.zeros((n + 1, n + 1), dtype=np.result_type(self.coordinates, np.float64))
        out[np.arange(n), np.arange(n)] = self.poles
        out[:n, n] = self.border
        out[n, :n] = self.border.conj()
        out[n, n] = self.corner_entry
        return out

    @classmethod
    def wigner(cls, before: SpectralData, extension: MinorExtension) -> ArrowheadProblem:
        if extension.corner is None:
            raise SpecificationError("a Wigner extension needs a corner entry")
        coordinates = eigen_coordinates(before.eigenvectors, extension.border, check=False)
        return cls(poles=before.eigenvalues, coordinates=coordinates, corner=extension.corner)

    @classmethod
    def wishart(cls, x: NDArray[np.float64], before: SpectralData, g: NDArray[np.float64]) -> ArrowheadProblem:
        """Problem for appending column ``g`` to the data matrix ``x`` with W = X^T X = ``before``."""
        if g.shape != (x.shape[0],):
            raise DimensionMismatchError("Wishart column", x.shape[0], g.shape[0])
        left = (x @ before.eigenvectors) / np.sqrt(before.eigenvalues)[None, :]
        coordinates = eigen_coordinates(left, g, check=False)
        residual = g - left @ coordinates
        gamma = 0.0 if x.shape[0] == x.shape[1] else float(residual @ residual)
        return cls(poles=before.eigenvalues, coordinates=coordinates, gamma=gamma, mode=ArrowheadMode.wishart)


def secular_f(problem: ArrowheadProblem, z: float) -> float:
    """f(z) = g_{N+1} - z - sum |g_j|^2/(lambda_j - z) (Wigner) or F(z) = 1 + sum |g_j|^2/(lambda_j - z) - gamma/z.

    Raises:
        PoleEvaluationError: If ``z`` is a pole (or 0 in Wishart mode).
    """
    if np.any(problem.poles == z) or (problem.mode == ArrowheadMode.wishart and z == 0):
        raise PoleEvaluationError(z)
    terms = problem.weights / (problem.poles - z)
    if problem.mode == ArrowheadMode.wishart:
        return float(1.0 + np.sum(terms) - (problem.gamma or 0.0) / z)
    return float(problem.corner - z - np.sum(terms))


@dataclass
class _Rotation:
    """Unitary 2x2 change of basis merging pole ``dropped`` into pole ``kept``."""

    dropped: int
    kept: int
    first: NDArray[Any]
    second: NDArray[Any]


@dataclass
class _Deflated:
    border: NDArray[Any]
    rotations: list[_Rotation] = field(default_factory=list)

    def restore(self, vectors: NDArray[Any]) -> NDArray[Any]:
        """Maps eigenvector rows from the merged basis back to the pole basis."""
        out = vectors.astype(np.result_type(vectors, *(r.first for r in self.rotations)), copy=True)
        for rotation in reversed(self.rotations):
            kept, dropped = out[rotation.kept].copy(), out[rotation.dropped].copy()
            out[rotation.dropped] = rotation.first[0] * kept + rotation.second[0] * dropped
            out[rotation.kept] = rotation.first[1] * kept + rotation.second[1] * dropped
        return out


def _merge_close_poles(poles: NDArray[np.float64], border: NDArray[Any]) -> _Deflated:
    state = _Deflated(border=border.copy())
    spread = max(float(np.max(np.abs(poles), initial=0.0)), float(np.ptp(poles)) if poles.size else 0.0)
    for j in np.flatnonzero(np.diff(poles) < MERGE_THRESHOLD * max(spread, np.finfo(float).tiny)):
        a, b = state.border[j], state.border[j + 1]
        radius = float(np.hypot(abs(a), abs(b)))
        if radius == 0.0:
            continue
        first = np.array([a, b]) / radius
        second = np.array([-np.conj(b), np.conj(a)]) / radius
        state.rotations.append(_Rotation(dropped=int(j), kept=int(j + 1), first=first, second=second))
        state.border[j], state.border[j + 1] = 0.0, radius
    if state.rotations:
        logger.debug("merged %d near-degenerate pole pairs", len(state.rotations))
        warnings.warn(MergedPolesWarning(len(state.rotations)), stacklevel=3)
    return state


def _solve_reduced(problem: ArrowheadProblem, poles: NDArray[np.float64], border: NDArray[Any]) -> NDArray[np.float64]:
    """Gaps ``z_i - poles_j`` for every root of the reduced secular equation, roots ascending."""
    weights = np.abs(border) ** 2
    if problem.mode == ArrowheadMode.wigner:
        function = RationalFunction(poles=poles, weights=weights, intercept=-problem.corner_entry, slope=1.0)
        roots = solve_intervals(function, list(range(LEFT_EXTERIOR, poles.size)))
        return roots.gaps(poles)
    gamma = float(problem.gamma or 0.0)
    if gamma > 0.0:
        extended = np.concatenate([[0.0], poles])
        function = RationalFunction(poles=extended, weights=np.concatenate([[gamma], weights / poles]), intercept=1.0)
        return solve_intervals(function, list(range(poles.size + 1))).gaps(poles)
    function = RationalFunction(poles=poles, weights=weights / poles, intercept=1.0)
    roots: SecularRoots = solve_intervals(function, list(range(poles.size)))
    return np.vstack([-poles[None, :], roots.gaps(poles)])


def _loewner_border(gaps: NDArray[np.float64], poles: NDArray[np.float64], border: NDArray[Any]) -> NDArray[Any]:
    """Border for which the computed roots are exact eigenvalues; keeps eigenvectors orthogonal."""
    pole_gaps = np.abs(poles[:, None] - poles[None, :])
    np.fill_diagonal(pole_gaps, 1.0)
    log_weight = np.log(np.abs(gaps)).sum(axis=0) - np.log(pole_gaps).sum(axis=1)
    magnitude = np.exp(0.5 * log_weight)
    phase = np.where(border == 0, 1.0, border / np.where(border == 0, 1.0, np.abs(border)))
    result: NDArray[Any] = magnitude * phase
    return result


def _reduced_vectors(gaps: NDArray[np.float64], border: NDArray[Any]) -> NDArray[Any]:
    """Columns (x_1..x_m, 1)/norm with x_j = b_j / (z - lambda_j)."""
    top = border[None, :] / gaps
    norms = np.sqrt(1.0 + np.sum(np.abs(top) ** 2, axis=1))
    vectors = np.hstack([top, np.ones((gaps.shape[0], 1))]) / norms[:, None]
    return vectors.T


def arrowhead_eigen(problem: ArrowheadProblem) -> SpectralData:
    """Eigenpairs of the bordered matrix, eigenvectors expressed in the pole basis.

    Poles with negligible weight are deflated (they stay eigenvalues with eigenvector e_j),
    near-degenerate poles are merged, and the remaining roots are found one per interlacing
    interval. The last coordinate of each non-deflated eigenvector is 1/sqrt|f'(z)| > 0.
    """
    n = problem.poles.size
    merged = _merge_close_poles(problem.poles, problem.border)
    weights = np.abs(merged.border) ** 2
    kept = np.flatnonzero(weights >= DEFLATION_THRESHOLD * weights.sum()) if weights.sum() > 0 else np.array([], int)
    deflated = np.setdiff1d(np.arange(n), kept)
    if deflated.size:
        logger.debug("deflated %d of %d poles", deflated.size, n)
    dtype = np.result_type(problem.coordinates, np.float64)
    vectors = np.zeros((n + 1, n + 1), dtype=dtype)
    values = np.empty(n + 1)
    values[: deflated.size] = problem.poles[deflated]
    vectors[deflated, np.arange(deflated.size)] = 1.0
    if kept.size == 0:
        values[n] = _lone_root(problem)
        vectors[n, n] = 1.0
    else:
        poles, border = problem.poles[kept], merged.border[kept]
        gaps = _solve_reduced(problem, poles, border)
        reduced = _reduced_vectors(gaps, _loewner_border(gaps, poles, border))
        values[deflated.size :] = gaps[:, 0] + poles[0]
        rows = np.concatenate([kept, [n]])
        vectors[np.ix_(rows, np.arange(deflated.size, n + 1))] = reduced
    vectors = merged.restore(vectors)
    order = np.argsort(values, kind="stable")
    return SpectralData(eigenvalues=values[order], eigenvectors=vectors[:, order])


def _lone_root(problem: ArrowheadProblem) -> float:
    if problem.mode == ArrowheadMode.wishart:
        return problem.corner_entry
    return problem.corner


@dataclass(frozen=True)
class OverlapMatrix:
    """Omega_ij = <u_i^(N+1), iota(u_j^(N))>, last column the new direction; rows phase-fixed."""

    entries: NDArray[Any]

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def row_norms(self) -> NDArray[np.float64]:
        return np.sqrt(np.sum(np.abs(self.entries) ** 2, axis=1))

    def unitarity_error(self) -> float:
        gram = self.entries.conj().T @ self.entries
        return float(np.max(np.abs(gram - np.eye(self.dim)), initial=0.0))


def fix_phases(entries: NDArray[Any]) -> NDArray[Any]:
    """Multiplies each row by a unit scalar so its diagonal entry is real and nonnegative.

    A row whose diagonal entry is exactly zero is normalized on its first nonzero entry instead.
    """
    out = entries.copy()
    for i in range(out.shape[0]):
        pivot = out[i, i] if i < out.shape[1] else 0.0
        if pivot == 0:
            nonzero = np.flatnonzero(out[i])
            if nonzero.size == 0:
                continue
            pivot = out[i, nonzero[0]]
        out[i] *= np.conj(pivot) / abs(pivot)
    return out


def overlap_matrix(after: SpectralData, before: SpectralData) -> OverlapMatrix:
    """Overlaps between consecutive eigenbases.

    Raises:
        DimensionMismatchError: If ``after`` is not exactly one dimension larger than ``before``.
    """
    n = before.dim
    if after.dim != n + 1 or after.eigenvectors.shape[0] != before.eigenvectors.shape[0] + 1:
        raise DimensionMismatchError("overlap bases", n + 1, after.dim)
    embedded = np.zeros((n + 1, n + 1), dtype=np.result_type(before.eigenvectors, np.float64))
    embedded[:n, :n] = before.eigenvectors
    embedded[n, n] = 1.0
    return OverlapMatrix(entries=fix_phases(after.eigenvectors.conj().T @ embedded))


@dataclass(frozen=True)
class GapTable:
    """Delta_ij = lambda_i^(N+1) - lambda_j^(N), computed on demand."""

    after: NDArray[np.float64]
    before: NDArray[np.float64]

    def __getitem__(self, index: tuple[int, int]) -> float:
        i, j = index
        return float(self.after[i] - self.before[j])

    def matrix(self) -> NDArray[np.float64]:
        result: NDArray[np.float64] = self.after[:, None] - self.before[None, :]
        return result

    def interlacing_violations(self, tolerance: float = 1e-10) -> int:
        """Number of broken inequalities lambda_i' <= lambda_i <= lambda_{i+1}', relative to the spectrum scale."""
        scale = max(1.0, float(np.max(np.abs(self.after), initial=0.0)))
        n = self.before.size
        below = self.after[:n] > self.before + tolerance * scale
        above = self.before > self.after[1 : n + 1] + tolerance * scale
        return int(np.count_nonzero(below) + np.count_nonzero(above))


@dataclass(frozen=True)
class ShiftIdentityReport:
    residuals: list[float]
    skipped: list[tuple[int, int]]

    @property
    def max_residual(self) -> float:
        finite = [r for r in self.residuals if np.isfinite(r)]
        return max(finite, default=0.0)


def shift_identity_check(
    h: NDArray[Any], d: NDArray[Any], pairs: Iterable[tuple[int, int]], *, threshold: float = 1e-12
) -> ShiftIdentityReport:
    """|(lambda_i(H+D) - lambda_j(H)) - u_i'^H D u_j / u_i'^H u_j| for each 0-based pair (i, j).

    Pairs whose denominator is at most ``threshold`` get a NaN residual and are listed as skipped.
    """
    before, after = eig_dense(h), eig_dense(h + d)
    residuals: list[float] = []
    skipped: list[tuple[int, int]] = []
    for i, j in pairs:
        left, right = after.eigenvectors[:, i], before.eigenvectors[:, j]
        denominator = np.vdot(left, right)
        if abs(denominator) <= threshold:
            skipped.append((i, j))
            residuals.append(float("nan"))
            continue
        shifted = np.vdot(left, d @ right) / denominator
        residuals.append(float(abs(after.eigenvalues[i] - before.eigenvalues[j] - shifted)))
    return ShiftIdentityReport(residuals=residuals, skipped=skipped)


@dataclass(frozen=True)
class RatioReport:
    ratio: float
    last_column: float
    diagonal: float
    filtered: tuple[int, ...] = ()

    @property
    def max_residual(self) -> float:
        return max(self.ratio, self.last_column, self.diagonal)


def _relative(a: NDArray[Any], b: NDArray[Any]) -> NDArray[np.float64]:
    scale = np.maximum(np.abs(a), np.abs(b))
    return np.where(scale > 0, np.abs(a - b) / np.where(scale > 0, scale, 1.0), 0.0)


def _triple_residuals(
    entries: NDArray[Any], delta: NDArray[np.float64], border: NDArray[Any], triples: Sequence[tuple[int, int, int]]
) -> tuple[float, float]:
    k, i, j = (np.array(axis, dtype=np.intp) for axis in zip(*triples, strict=True))
    ratio = _relative(
        entries[k, j] * delta[k, j] * np.conj(border[i]), entries[k, i] * delta[k, i] * np.conj(border[j])
    )
    last = _relative(entries[k, -1] * np.conj(border[i]), entries[k, i] * delta[k, i])
    return float(np.max(ratio, initial=0.0)), float(np.max(last, initial=0.0))


def _row_residuals(
    entries: NDArray[Any], delta: NDArray[np.float64], border: NDArray[Any], usable: NDArray[np.bool_]
) -> tuple[float, float]:
    """Residuals over every row, using the entries of each row that are large enough to trust."""
    n = delta.shape[1]
    magnitude = np.abs(entries[:, :n])
    last = entries[:, n]
    mask = (magnitude >= RATIO_FILTER * magnitude.max(axis=1, keepdims=True)) & usable[None, :]
    mask &= (np.abs(last) >= RATIO_FILTER)[:, None]
    scaled = entries[:, :n] * delta / np.conj(np.where(usable, border, 1.0))
    reference = scaled[np.arange(scaled.shape[0]), np.argmax(np.where(mask, magnitude, -1.0), axis=1)]
    ratio = np.where(mask, _relative(scaled, reference[:, None]), 0.0)
    to_last = np.where(mask, _relative(scaled, np.broadcast_to(last[:, None], scaled.shape)), 0.0)
    return float(np.max(ratio, initial=0.0)), float(np.max(to_last, initial=0.0))


def ratio_identities_check(
    omega: OverlapMatrix,
    gaps: GapTable,
    coordinates: NDArray[Any],
    *,
    mode: ArrowheadMode = ArrowheadMode.wigner,
    triples: Sequence[tuple[int, int, int]] | None = None,
) -> RatioReport:
    """Largest relative residuals of the ratio identities and the diagonal normalization.

    With b = g (Wigner) or sqrt(lambda) g (Wishart), every row k satisfies
    Omega_kj / Omega_ki = (Delta_ki / Delta_kj) conj(b_j / b_i) and
    Omega_k,N+1 / Omega_ki = Delta_ki / conj(b_i), and the diagonal satisfies
    |Omega_ii|^2 (Delta_ii / |b_i|)^2 (1 + sum_j |b_j|^2 / Delta_ij^2) = 1.

    Columns with |g_j| <= 1e-12 are left out and reported in ``filtered``. Without explicit
    0-based ``(k, i, j)`` triples, every row is checked on its entries of at least 1e-4 of the
    row maximum.
    """
    border = np.sqrt(gaps.before) * coordinates if mode == ArrowheadMode.wishart else coordinates
    usable = np.abs(coordinates) > 1e-12
    entries, delta = omega.entries, gaps.matrix()
    if triples is not None:
        ratio, last = _triple_residuals(entries, delta, border, triples)
    else:
        ratio, last = _row_residuals(entries, delta, border, usable)
    rows = np.flatnonzero(usable)
    normalization = (delta[rows, rows] / np.abs(border[rows])) ** 2 * (
        1.0 + np.sum(np.abs(border[None, rows]) ** 2 / delta[rows][:, rows] ** 2, axis=1)
    )
    diagonal = float(np.max(np.abs(np.abs(entries[rows, rows]) ** 2 * normalization - 1.0), initial=0.0))
    filtered = tuple(int(j) for j in np.flatnonzero(~usable))
    return RatioReport(ratio=ratio, last_column=last, diagonal=diagonal, filtered=filtered)
