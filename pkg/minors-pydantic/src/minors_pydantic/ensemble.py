from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from .shared import EntryLaw


class EnsembleSpec(BaseModel):
    """A Wigner ensemble, or a Wishart ensemble when ``t`` is set.

    Entries are centered with unit variance. With ``goe_diagonal`` the Wigner diagonal
    (and the appended corner) has variance 2 instead of 1.
    """

    beta: Literal[1, 2] = 1
    n: PositiveInt
    t: PositiveInt | None = Field(default=None, description="rows T of the Wishart data matrix")
    entry_law: EntryLaw = EntryLaw.gaussian
    goe_diagonal: bool = False

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def check_wishart(self) -> EnsembleSpec:
        if self.t is None:
            return self
        if self.t < self.n:
            raise ValueError(f"T must be at least N for a Wishart ensemble, got T={self.t} < N={self.n}")
        if self.beta != 1:
            raise ValueError("Wishart ensembles are real, beta must be 1")
        return self

    @property
    def is_wishart(self) -> bool:
        return self.t is not None

    @property
    def q(self) -> float:
        """Aspect ratio N/T of a Wishart ensemble."""
        if self.t is None:
            raise ValueError("aspect ratio is only defined for Wishart ensembles")
        return self.n / self.t
