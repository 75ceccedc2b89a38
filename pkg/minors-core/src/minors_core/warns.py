import warnings
from collections.abc import Iterator
from contextlib import contextmanager


class MinorsWarning(UserWarning):
    """Base warning class"""

    ...


class WindowTruncationWarning(MinorsWarning):
    """Inform user when the truncated tail of a window is larger than requested"""

    def __str__(self) -> str:
        return "Window tail bound {} exceeds tolerance {}; consider a wider window.".format(*self.args)


class ApproximantWarning(MinorsWarning):
    """Inform user when a window uses most of the approximant's eigenvalues"""

    def __str__(self) -> str:
        return "Window of {} points uses more than half of the {} available; densities may drift.".format(*self.args)


class ReplicaFailureWarning(MinorsWarning):
    """Inform user when some replicas failed but the run stayed within budget"""

    def __str__(self) -> str:
        return "{} of {} replicas failed and were dropped.".format(*self.args)


class MergedPolesWarning(MinorsWarning):
    """Inform user when near-degenerate poles were merged by the arrowhead solver"""

    def __str__(self) -> str:
        return "Merged {} near-degenerate pole pair(s).".format(*self.args)


@contextmanager
def strict() -> Iterator[None]:
    """Context manager for raising all minors warnings as errors

    For more fine-grained control or to filter warnings in the whole
    python session, use the :py:mod:`warnings` module directly.

    Examples:

    >>> from minors_core.warns import strict
    >>> with strict():
    ...     run_experiment(config)

    For finer-grained control:

    >>> import warnings
    >>> from minors_core.warns import ApproximantWarning
    >>> warnings.filterwarnings("error", category=ApproximantWarning)
    """

    warnings.filterwarnings("error", category=MinorsWarning)
    try:
        yield
    finally:
        warnings.filterwarnings("default", category=MinorsWarning)


@contextmanager
def ignore() -> Iterator[None]:
    """Context manager for ignoring all minors warnings

    Examples:

    >>> from minors_core.warns import ignore
    >>> with ignore():
    ...     run_experiment(config)
    """
    warnings.filterwarnings("ignore", category=MinorsWarning)
    try:
        yield
    finally:
        warnings.filterwarnings("default", category=MinorsWarning)
