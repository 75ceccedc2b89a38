"""Coupled limiting Markov chains for eigenvalues and eigenvector coefficients.

The bulk chain alternates ``psi_step`` (points) and ``phi_step`` (basis) at a fixed level h;
the hard-edge chain alternates ``t_step`` and ``hard_edge_phi_step`` with chi-square weights of
decreasing degrees. Both keep the basis in coordinates of the step-0 window.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from minors_pydantic import ProcessKind, ProcessSpec
from numpy.typing import NDArray

from .errors import SpecificationError
from .limits import gaussian_marks, sample_bessel
from .secular import (
    BasisState,
    PointConfiguration,
    hard_edge_phi_step,
    phi_step,
    psi_step,
    t_step,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Transition:
    """One-step overlaps: rows are new offsets, columns old offsets.

    ``shift`` is the old-offset label of the new point now at offset 0; a new point with label
    k sits between the old points at k - 1 and k.
    """

    entries: NDArray[Any]
    row_offsets: NDArray[np.intp]
    column_offsets: NDArray[np.intp]
    shift: int = 0

    def row(self, offset: int) -> NDArray[Any]:
        return self.entries[int(np.searchsorted(self.row_offsets, offset))]

    def branch_row(self, u: int) -> NDArray[Any]:
        """Row of the new point lying on old branch ``u``, i.e. between old offsets u and u + 1."""
        return self.row(u + 1 - self.shift)

    def entry(self, row_offset: int, column_offset: int) -> Any:
        return self.row(row_offset)[int(np.searchsorted(self.column_offsets, column_offset))]


@dataclass(frozen=True)
class ChainState:
    """State of a chain after ``step`` steps.

    ``config`` carries the marks drawn at this step when the chain moved on from it. The
    ``transition`` leads into this state and is unset at step 0.
    """

    step: int
    config: PointConfiguration
    basis: BasisState
    transition: Transition | None = None
    parameter: float = field(default=0.0)

    @property
    def leakage(self) -> NDArray[np.float64]:
        return self.basis.leakage

    def central_offsets(self, half_width: int | None = None) -> NDArray[np.intp]:
        """Offsets shared by the current and the initial window, optionally limited to |k| <= half_width."""
        shared = np.intersect1d(self.basis.row_offsets, self.basis.column_offsets)
        if half_width is None:
            return shared
        if self.config.kind == ProcessKind.sine:
            return shared[np.abs(shared) <= half_width]
        return shared[shared <= half_width]

    def product(self, half_width: int | None = None) -> NDArray[Any]:
        """Accumulated K-step overlaps over the central offsets (rows current, columns initial)."""
        return self.basis.block(self.central_offsets(half_width))


def _anchor_label(new: PointConfiguration, old: PointConfiguration) -> int:
    return int(old.offsets[int(np.searchsorted(old.points, new.at(0)))])


def _step_marks(config: PointConfiguration, step: int, rng: np.random.Generator) -> NDArray[Any]:
    if step == 0 and config.marks is not None:
        return config.marks
    return gaussian_marks(config.size, config.beta, rng)


def run_bulk_chain(
    initial: PointConfiguration, h: float, steps: int, rng: np.random.Generator
) -> list[ChainState]:
    """K steps of the bulk bead chain from a sine window.

    Marks of the initial configuration, when present, drive the first step; every later step
    draws fresh marks. The result holds K + 1 states.

    Raises:
        SpecificationError: If ``steps`` < 1 or ``initial`` is not a bulk window.
    """
    if steps < 1:
        raise SpecificationError("a chain needs at least one step")
    if initial.kind != ProcessKind.sine:
        raise SpecificationError("the bulk chain starts from a sine window")
    config, basis = initial, BasisState.initial(initial)
    trajectory = [ChainState(step=0, config=config, basis=basis, parameter=h)]
    for step in range(steps):
        marks = _step_marks(config, step, rng)
        marked = config.with_marks(marks)
        new = psi_step(marked, None, h)
        basis = phi_step(basis, new, marked, marks)
        transition = Transition(
            entries=_one_step(new, marked, marks),
            row_offsets=new.offsets,
            column_offsets=marked.offsets,
            shift=_anchor_label(new, marked),
        )
        trajectory[-1] = ChainState(trajectory[-1].step, marked, trajectory[-1].basis, trajectory[-1].transition, h)
        trajectory.append(ChainState(step=step + 1, config=new, basis=basis, transition=transition, parameter=h))
        logger.debug("bulk step %d: %d points, max leakage %.2e", step + 1, new.size, float(np.max(basis.leakage)))
        config = new
    return trajectory


def _one_step(new: PointConfiguration, old: PointConfiguration, marks: NDArray[Any]) -> NDArray[Any]:
    return phi_step(BasisState.initial(old), new, old, marks).coefficients


def _initial_bessel(alpha: int, window: int, rng: np.random.Generator) -> PointConfiguration:
    return sample_bessel(ProcessSpec(kind=ProcessKind.bessel, alpha=alpha, window=window), rng)


def run_hard_edge_chain(
    alpha: int,
    steps: int,
    window: int,
    rng: np.random.Generator,
    initial: PointConfiguration | None = None,
) -> list[ChainState]:
    """K steps of the hard-edge chain, with chi^(s) ~ chi-square(alpha - s) at step s.

    Raises:
        SpecificationError: If ``alpha`` <= ``steps`` or ``steps`` < 1.
    """
    if steps < 1:
        raise SpecificationError("a chain needs at least one step")
    if alpha <= steps:
        raise SpecificationError(f"the hard-edge chain needs alpha > K, got alpha={alpha}, K={steps}")
    config = initial if initial is not None else _initial_bessel(alpha, window, rng)
    basis = BasisState.initial(config)
    trajectory = [ChainState(step=0, config=config, basis=basis)]
    for step in range(steps):
        marks = _step_marks(config, step, rng)
        chi = float(rng.chisquare(alpha - step))
        marked = config.with_marks(marks)
        new = t_step(marked, None, chi)
        one_step = hard_edge_phi_step(BasisState.initial(marked), new, marked, marks)
        basis = hard_edge_phi_step(basis, new, marked, marks)
        transition = Transition(entries=one_step.coefficients, row_offsets=new.offsets, column_offsets=marked.offsets)
        trajectory[-1] = ChainState(trajectory[-1].step, marked, trajectory[-1].basis, trajectory[-1].transition, chi)
        trajectory.append(ChainState(step=step + 1, config=new, basis=basis, transition=transition))
        config = new
    return trajectory


def trajectory_rows(trajectory: list[ChainState]) -> list[tuple[int, int, float, float]]:
    """Flat ``(step, offset, point, mark)`` rows; complex marks are reported by modulus, absent ones as NaN."""
    rows: list[tuple[int, int, float, float]] = []
    for state in trajectory:
        marks = state.config.marks
        for index, (offset, point) in enumerate(zip(state.config.offsets, state.config.points, strict=True)):
            if marks is None:
                mark = float("nan")
            elif np.iscomplexobj(marks):
                mark = float(abs(marks[index]))
            else:
                mark = float(marks[index])
            rows.append((state.step, int(offset), float(point), mark))
    return rows
