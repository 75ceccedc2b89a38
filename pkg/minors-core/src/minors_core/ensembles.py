"""Wigner and Wishart samplers and one-step minor extensions.

Entries are centered with unit variance. Complex entries have independent real and
imaginary parts of variance 1/2 each and are stored as numpy ``complex128`` (interleaved
real/imaginary pairs). Hermitian matrices are extended as ``[[H, g], [g^H, c]]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from minors_pydantic import EnsembleSpec, EntryLaw
from numpy.typing import NDArray

from .errors import DimensionMismatchError, NonOrthonormalBasisError, SpecificationError

logger = logging.getLogger(__name__)

ORTHONORMALITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class MinorExtension:
    """Border ``g`` (length N for Wigner, T for Wishart) and, for Wigner, the corner ``g_{N+1}``."""

    border: NDArray[Any]
    corner: float | None = None


@dataclass(frozen=True)
class WishartSample:
    x: NDArray[np.float64]
    w: NDArray[np.float64]


def draw_entries(law: EntryLaw, shape: int | tuple[int, ...], rng: np.random.Generator) -> NDArray[np.float64]:
    """Real i.i.d. entries with mean 0 and variance 1."""
    match law:
        case EntryLaw.gaussian:
            return rng.standard_normal(shape)
        case EntryLaw.rademacher:
            return rng.integers(0, 2, size=shape).astype(np.float64) * 2.0 - 1.0
        case EntryLaw.uniform:
            return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=shape)
        case x:
            raise AssertionError(f"Expected code to be unreachable {x}")


def draw_complex_entries(law: EntryLaw, shape: int | tuple[int, ...], rng: np.random.Generator) -> NDArray[Any]:
    """Complex i.i.d. entries with E|z|^2 = 1, real and imaginary parts independent."""
    real = draw_entries(law, shape, rng)
    imag = draw_entries(law, shape, rng)
    return (real + 1j * imag) / math.sqrt(2.0)


def _draw(spec: EnsembleSpec, shape: int | tuple[int, ...], rng: np.random.Generator) -> NDArray[Any]:
    if spec.beta == 2:
        return draw_complex_entries(spec.entry_law, shape, rng)
    return draw_entries(spec.entry_law, shape, rng)


def _diagonal_scale(spec: EnsembleSpec) -> float:
    return math.sqrt(2.0) if spec.goe_diagonal else 1.0


def sample_wigner(spec: EnsembleSpec, rng: np.random.Generator) -> NDArray[Any]:
    """Wigner matrix H_N with unit-variance off-diagonal entries.

    The diagonal is real with variance 1, or 2 with ``spec.goe_diagonal``.

    Raises:
        SpecificationError: If ``spec`` describes a Wishart ensemble.
    """
    if spec.is_wishart:
        raise SpecificationError("sample_wigner needs a Wigner ensemble (no T)")
    upper = np.triu(_draw(spec, (spec.n, spec.n), rng), 1)
    diagonal = draw_entries(spec.entry_law, spec.n, rng) * _diagonal_scale(spec)
    return upper + upper.conj().T + np.diag(diagonal)


def sample_wishart(spec: EnsembleSpec, rng: np.random.Generator) -> WishartSample:
    """Data matrix X (T x N) and W = X^T X."""
    if spec.t is None:
        raise SpecificationError("sample_wishart needs a Wishart ensemble (T set)")
    x = draw_entries(spec.entry_law, (spec.t, spec.n), rng)
    return WishartSample(x=x, w=x.T @ x)


def sample_extension(spec: EnsembleSpec, rng: np.random.Generator) -> MinorExtension:
    """Fresh border (and corner, for Wigner) drawn from the ensemble's entry law."""
    if spec.t is not None:
        return MinorExtension(border=draw_entries(spec.entry_law, spec.t, rng))
    border = _draw(spec, spec.n, rng)
    corner = float(draw_entries(spec.entry_law, 1, rng)[0]) * _diagonal_scale(spec)
    return MinorExtension(border=border, corner=corner)


def extend_wigner(h: NDArray[Any], extension: MinorExtension) -> NDArray[Any]:
    """Bordered matrix [[H, g], [g^H, g_{N+1}]]; its leading N-minor is ``h`` bit for bit."""
    n = h.shape[0]
    if extension.border.shape != (n,):
        raise DimensionMismatchError("Wigner border", n, extension.border.shape[0])
    if extension.corner is None:
        raise SpecificationError("a Wigner extension needs a corner entry")
    out = np.zeros((n + 1, n + 1), dtype=np.result_type(h, extension.border))
    out[:n, :n] = h
    out[:n, n] = extension.border
    out[n, :n] = extension.border.conj()
    out[n, n] = extension.corner
    return out


def extend_wishart(x: NDArray[np.float64], g: NDArray[np.float64]) -> NDArray[np.float64]:
    """Data matrix (X | g); the leading N-minor of its Gram matrix is X^T X."""
    if g.shape != (x.shape[0],):
        raise DimensionMismatchError("Wishart column", x.shape[0], g.shape[0])
    return np.column_stack([x, g])


def principal_minor(h: NDArray[Any], n: int) -> NDArray[Any]:
    if not 0 <= n <= h.shape[0]:
        raise SpecificationError(f"minor size {n} outside [0, {h.shape[0]}]")
    return h[:n, :n]


def eigen_coordinates(basis: NDArray[Any], g: NDArray[Any], *, check: bool = True) -> NDArray[Any]:
    """Coordinates g_i = <v_i, g> = v_i^H g of ``g`` in the orthonormal columns of ``basis``.

    Raises:
        DimensionMismatchError: If ``g`` does not live in the basis' ambient space.
        NonOrthonormalBasisError: If ``check`` and the columns are not orthonormal to 1e-10.
    """
    if g.shape != (basis.shape[0],):
        raise DimensionMismatchError("coordinate vector", basis.shape[0], g.shape[0])
    if check and basis.shape[1]:
        deviation = float(np.max(np.abs(basis.conj().T @ basis - np.eye(basis.shape[1]))))
        if deviation > ORTHONORMALITY_TOLERANCE:
            raise NonOrthonormalBasisError(deviation)
    return basis.conj().T @ g
