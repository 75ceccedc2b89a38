from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from minors_pydantic import ExperimentResult


class MinorsError(Exception):
    pass


class SpecificationError(MinorsError, ValueError):
    """Raised when parameters violate an operation's preconditions."""


class DimensionMismatchError(MinorsError, ValueError):
    def __init__(self, what: str, expected: int, actual: int) -> None:
        super().__init__(f"{what}: expected dimension {expected}, got {actual}")
        self.what = what
        self.expected = expected
        self.actual = actual

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.what, self.expected, self.actual)


class NonOrthonormalBasisError(MinorsError, ValueError):
    def __init__(self, deviation: float) -> None:
        super().__init__(f"basis is not orthonormal: max |V^H V - I| = {deviation:.3e}")
        self.deviation = deviation

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.deviation,)


class PoleEvaluationError(MinorsError, ZeroDivisionError):
    def __init__(self, z: float) -> None:
        super().__init__(f"evaluation at a pole: z = {z!r}")
        self.z = z

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.z,)


class ConvergenceError(MinorsError, ArithmeticError):
    """Raised when an eigensolver does not converge; carries matrix diagnostics."""

    def __init__(self, message: str, diagnostics: dict[str, Any]) -> None:
        details = ", ".join(f"{key}={value}" for key, value in diagnostics.items())
        super().__init__(f"{message} ({details})")
        self.message = message
        self.diagnostics = diagnostics

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.message, self.diagnostics)


class BracketingError(MinorsError, ArithmeticError):
    def __init__(self, message: str, interval: tuple[float, float]) -> None:
        super().__init__(f"{message} on interval ({interval[0]!r}, {interval[1]!r})")
        self.message = message
        self.interval = interval

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.message, self.interval)


class DegenerateGapError(MinorsError, ArithmeticError):
    def __init__(self, gap: float) -> None:
        super().__init__(f"degenerate gap {gap:.3e} between consecutive configurations")
        self.gap = gap

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.gap,)


class WindowError(MinorsError, ValueError):
    """Raised when a branch sits too close to the window boundary to be trusted."""

    def __init__(self, branch: int, window: int, required_window: int) -> None:
        super().__init__(
            f"branch {branch} is too close to the edge of a window of {window}; use at least {required_window}"
        )
        self.branch = branch
        self.window = window
        self.required_window = required_window

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.branch, self.window, self.required_window)


class ReplicaFailureError(MinorsError):
    """Raised when more replicas fail than the failure budget allows."""

    def __init__(self, result: ExperimentResult) -> None:
        super().__init__(f"{result.failures} of {result.replicas} replicas failed in {result.kind}")
        self.result = result


NUMERICAL_FAILURES = (ConvergenceError, BracketingError, DegenerateGapError, PoleEvaluationError)
"""Failures a replica may hit by bad luck; anything else is a bug."""
