from __future__ import annotations

import datetime

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt

from .constants import ARTIFACT_VERSION, FAILURE_BUDGET
from .experiment import ExperimentConfig
from .shared import ExperimentKind


class Moments(BaseModel):
    count: NonNegativeInt
    mean: float
    variance: float

    model_config = ConfigDict(extra="forbid")


class Histogram(BaseModel):
    """Shared binning for the empirical and theoretical samples; each density integrates to 1."""

    edges: list[float]
    empirical: list[float]
    theoretical: list[float]

    model_config = ConfigDict(extra="forbid")

    def bins(self) -> list[tuple[float, float, float, float]]:
        """Rows of ``(left, right, empirical density, theoretical density)``."""
        return [
            (self.edges[b], self.edges[b + 1], self.empirical[b], self.theoretical[b])
            for b in range(len(self.empirical))
        ]


class OffsetResult(BaseModel):
    """Comparison at one offset (bulk, hard edge), index pair (soft edge) or edge index (gaps)."""

    offset: int | None = None
    pair: tuple[int, int] | None = None
    histogram: Histogram | None = None
    ks: float | None = Field(default=None, ge=0.0, le=1.0)
    empirical: Moments
    theoretical: Moments
    top_bin_mass: float | None = None

    model_config = ConfigDict(extra="forbid")

    @property
    def label(self) -> str:
        if self.pair is not None:
            return f"{self.pair[0]}:{self.pair[1]}"
        return str(self.offset)


class ExperimentResult(BaseModel):
    kind: ExperimentKind
    config: ExperimentConfig
    version: str = ARTIFACT_VERSION
    replicas: NonNegativeInt
    failures: NonNegativeInt = 0
    offsets: list[OffsetResult] = Field(default_factory=list)
    metrics: dict[str, float] = Field(default_factory=dict)
    runtime_seconds: float = Field(default=0.0, exclude=True)

    model_config = ConfigDict(extra="forbid")

    @property
    def failure_rate(self) -> float:
        return self.failures / self.replicas if self.replicas else 0.0

    @property
    def within_failure_budget(self) -> bool:
        return self.failure_rate <= FAILURE_BUDGET


class RunManifest(BaseModel):
    """Everything needed to rerun an experiment and check its outputs."""

    config: ExperimentConfig
    version: str = ARTIFACT_VERSION
    seed: NonNegativeInt
    started_at: datetime.datetime
    wall_time_seconds: float
    overrides: list[str] = Field(default_factory=list)
    digests: dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid")

    @classmethod
    def new(cls, config: ExperimentConfig, wall_time_seconds: float, overrides: list[str] | None = None) -> RunManifest:
        """Creates a manifest stamped with the current UTC time."""
        return RunManifest(
            config=config,
            seed=config.seed,
            started_at=datetime.datetime.now(tz=datetime.UTC),
            wall_time_seconds=wall_time_seconds,
            overrides=overrides or [],
        )
