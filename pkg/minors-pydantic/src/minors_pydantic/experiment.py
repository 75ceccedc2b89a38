from __future__ import annotations

import math
from collections.abc import Callable
from typing import Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    model_validator,
)

from .constants import (
    AIRY_WINDOW,
    BESSEL_WINDOW,
    EDGE_APPROXIMANT_SIZE,
    SINE_APPROXIMANT_SIZE,
    SINE_WINDOW,
)
from .ensemble import EnsembleSpec
from .offsets import IndexPairs, Offsets
from .process import ProcessSpec
from .shared import Approximant, EntryLaw, ExperimentKind, ProcessKind, Side

_SINE = {"window": SINE_WINDOW, "approximant_size": SINE_APPROXIMANT_SIZE}
_AIRY = {"window": AIRY_WINDOW, "approximant_size": EDGE_APPROXIMANT_SIZE, "pairs": [(1, 2), (2, 3)]}
_NEAR = [-1, 0, 1, 2]

KIND_DEFAULTS: dict[ExperimentKind, dict[str, Any]] = {
    ExperimentKind.wigner_bulk_mean_profile: {**_SINE, "offsets": list(range(-8, 9))},
    ExperimentKind.wigner_bulk_hist: {**_SINE, "offsets": _NEAR},
    ExperimentKind.wigner_edge: {**_AIRY, "side": Side.left},
    ExperimentKind.wishart_soft_edge: {**_AIRY, "side": Side.right},
    ExperimentKind.wishart_hard_edge: {
        "window": BESSEL_WINDOW,
        "approximant_size": EDGE_APPROXIMANT_SIZE,
        "alpha": 1,
        "offsets": _NEAR,
        "reference_index": 3,
    },
    ExperimentKind.wishart_bulk: {**_SINE, "offsets": _NEAR},
    ExperimentKind.gap_law_wigner: {"side": Side.left},
    ExperimentKind.gap_law_wishart: {"side": Side.right},
    ExperimentKind.band_decay: {},
    ExperimentKind.beadchain_kstep: {**_SINE, "offsets": _NEAR, "steps": 2},
}
"""Per-kind defaults, applied before validation for every key the input leaves out."""

WISHART_KINDS = frozenset(
    {
        ExperimentKind.wishart_soft_edge,
        ExperimentKind.wishart_hard_edge,
        ExperimentKind.wishart_bulk,
        ExperimentKind.gap_law_wishart,
    }
)
SINE_KINDS = frozenset(
    {
        ExperimentKind.wigner_bulk_mean_profile,
        ExperimentKind.wigner_bulk_hist,
        ExperimentKind.wishart_bulk,
        ExperimentKind.beadchain_kstep,
    }
)
AIRY_KINDS = frozenset({ExperimentKind.wigner_edge, ExperimentKind.wishart_soft_edge})


class ExperimentConfig(BaseModel):
    """One Monte Carlo experiment.

    Keys that do not apply to ``kind`` may be left out; keys a kind needs but that have a
    natural default are filled from ``KIND_DEFAULTS``. ``energy`` is in semicircle units for
    Wigner kinds and in Marchenko-Pastur units (eigenvalue / T) for ``wishart_bulk``.
    """

    kind: ExperimentKind
    seed: NonNegativeInt
    replicas: PositiveInt = 1000
    n: PositiveInt = Field(description="matrix size N before the extension")
    beta: Literal[1, 2] = 1
    entry_law: EntryLaw = EntryLaw.gaussian
    goe_diagonal: bool = False
    energy: float | None = None
    q: float | None = Field(default=None, gt=0.0, le=1.0)
    alpha: PositiveInt | None = None
    side: Side | None = None
    offsets: Offsets | None = None
    pairs: IndexPairs | None = None
    reference_index: PositiveInt | None = None
    edge_index: PositiveInt = 1
    steps: PositiveInt | None = None
    bins: PositiveInt | None = None
    window: PositiveInt | None = None
    approximant_size: PositiveInt | None = None
    approximant: Approximant = Approximant.tridiagonal
    calibration: PositiveFloat = 1.0

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("kind") in KIND_DEFAULTS:
            defaults = KIND_DEFAULTS[ExperimentKind(data["kind"])]
            data = {**defaults, **{k: v for k, v in data.items() if v is not None}}
        return data

    @model_validator(mode="after")
    def check_kind(self) -> ExperimentConfig:
        for check in _CHECKS.get(self.kind, ()):
            check(self)
        return self

    @property
    def wishart_t(self) -> int:
        """Rows T of the Wishart data matrix before the extension."""
        if self.kind == ExperimentKind.wishart_hard_edge and self.alpha is not None:
            return self.n + self.alpha
        if self.q is None:
            raise ValueError(f"{self.kind} is not a Wishart experiment")
        return max(self.n, round(self.n / self.q))

    @property
    def effective_q(self) -> float:
        return self.n / self.wishart_t

    def ensemble(self) -> EnsembleSpec:
        """The ensemble sampled by the empirical side."""
        return EnsembleSpec(
            beta=self.beta,
            n=self.n,
            t=self.wishart_t if self.kind in WISHART_KINDS else None,
            entry_law=self.entry_law,
            goe_diagonal=self.goe_diagonal,
        )

    def process(self) -> ProcessSpec | None:
        """The limiting process sampled by the theoretical side, if the kind has one."""
        if self.kind in SINE_KINDS:
            kind = ProcessKind.sine
        elif self.kind in AIRY_KINDS:
            kind = ProcessKind.airy
        elif self.kind == ExperimentKind.wishart_hard_edge:
            kind = ProcessKind.bessel
        else:
            return None
        return ProcessSpec(
            kind=kind,
            beta=self.beta,
            alpha=self.alpha or 0,
            window=self.window,
            approximant_size=self.approximant_size,
            approximant=self.approximant,
            energy=self.energy if self.kind in SINE_KINDS - WISHART_KINDS and self.energy is not None else 0.0,
            side=self.side or Side.left,
        )


def _require(config: ExperimentConfig, *names: str) -> None:
    missing = [name for name in names if getattr(config, name) is None]
    if missing:
        raise ValueError(f"{config.kind} requires {', '.join(missing)}")


def _check_wigner_energy(config: ExperimentConfig) -> None:
    _require(config, "energy")
    assert config.energy is not None
    if not -2.0 < config.energy < 2.0:
        raise ValueError("E must lie in (-2,2)")


def _check_mp_energy(config: ExperimentConfig) -> None:
    _require(config, "energy", "q")
    assert config.energy is not None and config.q is not None
    lower, upper = (1 - math.sqrt(config.q)) ** 2, (1 + math.sqrt(config.q)) ** 2
    if not lower < config.energy < upper:
        raise ValueError(f"E must lie in the Marchenko-Pastur bulk ({lower:.6g},{upper:.6g}) for q={config.q}")


def _check_real(config: ExperimentConfig) -> None:
    if config.beta != 1:
        raise ValueError(f"{config.kind} concerns real data matrices, beta must be 1")


def _check_q_side(config: ExperimentConfig) -> None:
    _require(config, "q", "side")
    if config.side == Side.left and config.q == 1.0:
        raise ValueError("the left soft edge requires q < 1")


def _check_bulk_offsets(config: ExperimentConfig) -> None:
    _require(config, "offsets", "window")
    assert config.offsets is not None and config.window is not None
    reach = max(abs(k) for k in config.offsets) if config.offsets else 0
    if 4 * (reach + 1) > config.window:
        raise ValueError(f"offsets up to {reach} need a window of at least {4 * (reach + 1)}")
    if 2 * reach + 2 > config.n:
        raise ValueError(f"offsets up to {reach} do not fit in a matrix of size {config.n}")


def _check_reference(config: ExperimentConfig) -> None:
    if config.reference_index is None or config.offsets is None:
        return
    columns = [config.reference_index - k for k in config.offsets]
    if min(columns, default=1) < 1 or max(columns + [config.reference_index]) > config.n:
        raise ValueError("reference index minus each offset must lie between 1 and N")


def _check_pairs(config: ExperimentConfig) -> None:
    _require(config, "pairs", "window")
    assert config.pairs is not None and config.window is not None
    largest = max((max(pair) for pair in config.pairs), default=1)
    if min((min(pair) for pair in config.pairs), default=1) < 1:
        raise ValueError("edge index pairs are 1-based")
    if largest > min(config.window, config.n):
        raise ValueError(f"edge index {largest} exceeds the window or the matrix size")


def _check_hard_edge(config: ExperimentConfig) -> None:
    _require(config, "alpha", "offsets", "reference_index", "window")
    assert config.offsets is not None and config.reference_index is not None and config.window is not None
    columns = [config.reference_index - k for k in config.offsets]
    if min(columns, default=1) < 1 or max(columns + [config.reference_index]) > min(config.window, config.n):
        raise ValueError("reference index minus each offset must lie between 1 and min(window, N)")


def _check_gap(config: ExperimentConfig) -> None:
    _require(config, "side")
    if config.edge_index > config.n:
        raise ValueError("edge index exceeds the matrix size")


def _check_steps(config: ExperimentConfig) -> None:
    _require(config, "steps")


def _check_band(config: ExperimentConfig) -> None:
    if config.n < 20:
        raise ValueError("band decay fits k in [4, N/4] and needs N >= 20")


_CHECKS: dict[ExperimentKind, tuple[Callable[[ExperimentConfig], None], ...]] = {
    ExperimentKind.wigner_bulk_mean_profile: (_check_wigner_energy, _check_bulk_offsets),
    ExperimentKind.wigner_bulk_hist: (_check_wigner_energy, _check_bulk_offsets, _check_reference),
    ExperimentKind.wigner_edge: (_check_pairs,),
    ExperimentKind.wishart_soft_edge: (_check_real, _check_q_side, _check_pairs),
    ExperimentKind.wishart_hard_edge: (_check_real, _check_hard_edge),
    ExperimentKind.wishart_bulk: (_check_real, _check_mp_energy, _check_bulk_offsets),
    ExperimentKind.gap_law_wigner: (_check_gap,),
    ExperimentKind.gap_law_wishart: (_check_real, _check_q_side, _check_gap),
    ExperimentKind.beadchain_kstep: (_check_wigner_energy, _check_bulk_offsets, _check_steps),
    ExperimentKind.band_decay: (_check_band,),
}
