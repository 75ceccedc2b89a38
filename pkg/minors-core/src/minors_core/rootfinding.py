"""Vectorized roots of increasing rational functions.

Every secular equation in this package has the form

    phi(z) = intercept + slope * z + sum_j weights[j] / (poles[j] - z)

with ascending poles, positive weights and a nonnegative slope, so ``phi`` increases
strictly from -inf to +inf between consecutive poles. Roots are located relative to the
nearer pole of their interval (the origin) and solved for ``tau = z - poles[origin]``,
which keeps the gaps ``z - poles[j]`` accurate even when a root hugs a pole.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import BracketingError

logger = logging.getLogger(__name__)

LEFT_EXTERIOR = -1
"""Interval index of (-inf, poles[0]); index k >= 0 is (poles[k], poles[k+1]) and n-1 is (poles[-1], inf)."""

DEFAULT_TOLERANCE = 1e-13
MAX_ITERATIONS = 256
MAX_EXPANSIONS = 64


@dataclass(frozen=True)
class SecularRoots:
    poles: NDArray[np.float64]
    origin: NDArray[np.intp]
    tau: NDArray[np.float64]

    @property
    def values(self) -> NDArray[np.float64]:
        return self.poles[self.origin] + self.tau

    def gaps(self, targets: NDArray[np.float64] | None = None) -> NDArray[np.float64]:
        """Matrix of ``root_i - targets_j`` (targets default to the poles), accurate near poles."""
        targets = self.poles if targets is None else targets
        return self.tau[:, None] + (self.poles[self.origin][:, None] - targets[None, :])


@dataclass(frozen=True)
class RationalFunction:
    poles: NDArray[np.float64]
    weights: NDArray[np.float64]
    intercept: float = 0.0
    slope: float = 0.0

    def evaluate(self, origin: NDArray[np.intp], tau: NDArray[np.float64]) -> tuple[NDArray[np.float64], ...]:
        """Value, derivative and magnitude scale at ``poles[origin] + tau``, row by row."""
        anchor = self.poles[origin]
        shift = (self.poles[None, :] - anchor[:, None]) - tau[:, None]
        terms = self.weights[None, :] / shift
        linear = self.intercept + self.slope * (anchor + tau)
        value = linear + terms.sum(axis=1)
        derivative = self.slope + (terms / shift).sum(axis=1)
        scale = np.abs(self.intercept) + np.abs(self.slope * (anchor + tau)) + np.abs(terms).sum(axis=1)
        return value, derivative, scale

    def at(self, z: NDArray[np.float64]) -> NDArray[np.float64]:
        terms = self.weights[None, :] / (self.poles[None, :] - z[:, None])
        result: NDArray[np.float64] = self.intercept + self.slope * z + terms.sum(axis=1)
        return result


def _exterior_reach(function: RationalFunction, edge: float) -> float:
    return float(function.weights.sum() + abs(function.intercept + function.slope * edge) + 1.0)


def _expand(function: RationalFunction, edge: float, direction: float) -> float:
    reach = _exterior_reach(function, edge)
    for _ in range(MAX_EXPANSIONS):
        value = function.at(np.array([edge + direction * reach]))[0]
        if value * direction > 0:
            return reach
        logger.debug("expanding exterior bracket beyond %r to %r", edge, 2 * reach)
        reach *= 2.0
    raise BracketingError("no sign change in exterior interval", (edge, edge + direction * reach))


def _brackets(
    function: RationalFunction, intervals: NDArray[np.intp]
) -> tuple[NDArray[np.intp], NDArray[np.float64], NDArray[np.float64]]:
    poles = function.poles
    n = poles.size
    origin = np.empty(intervals.size, dtype=np.intp)
    lo = np.zeros(intervals.size)
    hi = np.zeros(intervals.size)
    interior = (intervals >= 0) & (intervals < n - 1)
    if interior.any():
        k = intervals[interior]
        mid = 0.5 * (poles[k] + poles[k + 1])
        right_half = function.at(mid) <= 0.0
        origin[interior] = np.where(right_half, k + 1, k)
        lo[interior] = np.where(right_half, mid - poles[k + 1], 0.0)
        hi[interior] = np.where(right_half, 0.0, mid - poles[k])
    left = intervals == LEFT_EXTERIOR
    if left.any():
        origin[left], lo[left] = 0, -_expand(function, float(poles[0]), -1.0)
    right = intervals == n - 1
    if right.any():
        origin[right], hi[right] = n - 1, _expand(function, float(poles[-1]), 1.0)
    return origin, lo, hi


def _propose(
    tau: NDArray[np.float64],
    value: NDArray[np.float64],
    derivative: NDArray[np.float64],
    lo: NDArray[np.float64],
    hi: NDArray[np.float64],
) -> NDArray[np.float64]:
    """Rational step fitting ``A - B/tau`` around the origin pole, then Newton, then bisection."""
    with np.errstate(divide="ignore", invalid="ignore"):
        rational = derivative * tau * tau / (value + derivative * tau)
        newton = tau - value / derivative
    inside_rational = (rational > lo) & (rational < hi) & np.isfinite(rational) & (tau != 0.0)
    inside_newton = (newton > lo) & (newton < hi) & np.isfinite(newton)
    return np.where(inside_rational, rational, np.where(inside_newton, newton, 0.5 * (lo + hi)))


def solve_intervals(
    function: RationalFunction,
    intervals: NDArray[np.intp] | list[int],
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> SecularRoots:
    """One root of ``function`` per requested interval.

    Converged when ``|phi| <= tolerance * scale`` or the bracket is a few ulp wide.

    Raises:
        BracketingError: If an exterior interval shows no sign change or a root does not converge.
    """
    requested = np.asarray(intervals, dtype=np.intp)
    origin, lo, hi = _brackets(function, requested)
    tau = np.where(hi == 0.0, lo, hi)
    active = np.arange(requested.size)
    for _ in range(MAX_ITERATIONS):
        if active.size == 0:
            return SecularRoots(poles=function.poles, origin=origin, tau=tau)
        value, derivative, scale = function.evaluate(origin[active], tau[active])
        hi[active] = np.where(value > 0.0, tau[active], hi[active])
        lo[active] = np.where(value < 0.0, tau[active], lo[active])
        width = hi[active] - lo[active]
        done = (np.abs(value) <= tolerance * scale) | (width <= 4.0 * np.spacing(np.maximum(-lo[active], hi[active])))
        step = _propose(tau[active], value, derivative, lo[active], hi[active])
        done |= step == tau[active]
        tau[active] = np.where(done, tau[active], step)
        active = active[~done]
    worst = int(active[0])
    anchor = float(function.poles[origin[worst]])
    raise BracketingError("root did not converge", (anchor + float(lo[worst]), anchor + float(hi[worst])))
