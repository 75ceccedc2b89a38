from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, model_validator

from .constants import (
    AIRY_WINDOW,
    BESSEL_WINDOW,
    EDGE_APPROXIMANT_SIZE,
    SINE_APPROXIMANT_SIZE,
    SINE_WINDOW,
)
from .shared import Approximant, ProcessKind, Side

DEFAULT_WINDOWS = {ProcessKind.sine: SINE_WINDOW, ProcessKind.airy: AIRY_WINDOW, ProcessKind.bessel: BESSEL_WINDOW}
DEFAULT_SIZES = {
    ProcessKind.sine: SINE_APPROXIMANT_SIZE,
    ProcessKind.airy: EDGE_APPROXIMANT_SIZE,
    ProcessKind.bessel: EDGE_APPROXIMANT_SIZE,
}


class ProcessSpec(BaseModel):
    """A limiting point process and the finite matrix used to approximate it.

    ``window`` is the half-width M for sine windows (2M+1 points) and the number of
    points kept from the edge for Airy and Bessel windows.
    """

    kind: ProcessKind
    beta: Literal[1, 2] = 1
    alpha: NonNegativeInt = 0
    window: PositiveInt | None = None
    approximant_size: PositiveInt | None = None
    approximant: Approximant = Approximant.tridiagonal
    energy: float = Field(default=0.0, gt=-2.0, lt=2.0)
    side: Side = Side.left

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def check_window(self) -> ProcessSpec:
        if self.kind == ProcessKind.bessel and self.beta != 1:
            raise ValueError("the Bessel process is sampled from real data matrices, beta must be 1")
        if self.points_needed > self.size:
            raise ValueError(
                f"window of {self.points_needed} points exceeds the {self.size} eigenvalues of the approximant"
            )
        return self

    @property
    def size(self) -> int:
        """Approximant size with the per-kind default filled in."""
        return self.approximant_size or DEFAULT_SIZES[self.kind]

    @property
    def half_width(self) -> int:
        """Window with the per-kind default filled in."""
        return self.window or DEFAULT_WINDOWS[self.kind]

    @property
    def points_needed(self) -> int:
        if self.kind == ProcessKind.sine:
            return 2 * self.half_width + 1
        return self.half_width

    def refined(self, factor: int = 2) -> ProcessSpec:
        """The same process approximated by a matrix ``factor`` times larger."""
        return self.model_copy(update={"approximant_size": self.size * factor})

