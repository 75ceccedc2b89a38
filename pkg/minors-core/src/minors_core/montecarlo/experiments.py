"""One replica of each experiment: an empirical finite-N draw and a theoretical limit draw.

Replica ``r`` of an experiment seeded ``s`` uses ``RandomStream(s).child(r)``; the empirical
side draws from sub-stream 0 and the theoretical side from sub-stream 1.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from minors_pydantic import ExperimentConfig, ExperimentKind, ProcessSpec, Side
from numpy.typing import NDArray

from ..beadchain import run_bulk_chain
from ..ensembles import extend_wigner, extend_wishart, sample_extension, sample_wigner, sample_wishart
from ..errors import SpecificationError
from ..laws import (
    bulk_overlap_row,
    edge_overlap_law,
    gap_law,
    h_overlap_wishart,
    h_wigner,
    hard_edge_overlap_row,
    wishart_gap_scale,
    wishart_soft_edge_overlap_law,
)
from ..limits import sample_airy, sample_bessel, sample_sine
from ..spectral import SpectralData, anchor_index, eig_dense, eig_values, overlap_matrix
from ..streams import RandomStream

EMPIRICAL, THEORETICAL = 0, 1
"""Sub-stream keys of a replica."""

ANCHORED_BRANCH = -1
"""Branch of the new point that keeps the anchor index: it lies between old offsets -1 and 0."""


@dataclass(frozen=True)
class ReplicaSample:
    """Values drawn by one replica, keyed by offset label."""

    empirical: dict[str, NDArray[np.float64]]
    theoretical: dict[str, NDArray[np.float64]] = field(default_factory=dict)


def labels(config: ExperimentConfig) -> list[str]:
    """Labels of the compared quantities, in output order."""
    match config.kind:
        case ExperimentKind.wigner_edge | ExperimentKind.wishart_soft_edge:
            return [f"{i}:{j}" for i, j in config.pairs or []]
        case ExperimentKind.gap_law_wigner | ExperimentKind.gap_law_wishart:
            return [str(config.edge_index)]
        case ExperimentKind.band_decay:
            return [str(k) for k in range(1, config.n // 2 + 1)]
        case _:
            return [str(k) for k in config.offsets or []]


def _process(config: ExperimentConfig) -> ProcessSpec:
    process = config.process()
    if process is None:
        raise SpecificationError(f"{config.kind} has no limiting process")
    return process


def _values(entries: list[Any]) -> NDArray[np.float64]:
    """Real values are kept signed, complex ones are reported by modulus."""
    array = np.asarray(entries)
    if np.iscomplexobj(array):
        return np.abs(array)
    return array.astype(np.float64)


def _wigner_pair(config: ExperimentConfig, rng: np.random.Generator) -> tuple[SpectralData, SpectralData]:
    spec = config.ensemble()
    h = sample_wigner(spec, rng)
    return eig_dense(h), eig_dense(extend_wigner(h, sample_extension(spec, rng)))


def _wishart_pair(config: ExperimentConfig, rng: np.random.Generator) -> tuple[SpectralData, SpectralData]:
    spec = config.ensemble()
    sample = sample_wishart(spec, rng)
    extended = extend_wishart(sample.x, sample_extension(spec, rng).border)
    return eig_dense(sample.w), eig_dense(extended.T @ extended)


def _column_overlaps(entries: NDArray[Any], row: int, offsets: list[int]) -> dict[str, NDArray[np.float64]]:
    """|Omega_{row, row - k}| for each offset k."""
    columns = [row - k for k in offsets]
    if row >= entries.shape[0] or min(columns) < 0 or max(columns) >= entries.shape[1] - 1:
        raise SpecificationError(f"offsets {offsets} around index {row} leave the spectrum")
    return {str(k): np.array([abs(entries[row, c])]) for k, c in zip(offsets, columns, strict=True)}


def _law_row(row: NDArray[Any], positions: list[int], offsets: list[int]) -> dict[str, NDArray[np.float64]]:
    return {str(k): np.array([abs(row[p])]) for k, p in zip(offsets, positions, strict=True)}


def wigner_bulk(config: ExperimentConfig, stream: RandomStream) -> ReplicaSample:
    """|Omega_{i, i-k}| at the anchor (or reference index) vs the bulk law on a sine window."""
    assert config.energy is not None and config.offsets is not None
    before, after = _wigner_pair(config, stream.child(EMPIRICAL).generator())
    if config.reference_index is not None:
        anchor = config.reference_index - 1
    else:
        anchor = anchor_index(before.eigenvalues, config.energy * math.sqrt(config.n))
    empirical = _column_overlaps(overlap_matrix(after, before).entries, anchor, config.offsets)
    window = sample_sine(_process(config), stream.child(THEORETICAL).generator())
    row = bulk_overlap_row(window, h_wigner(config.energy), ANCHORED_BRANCH)
    theoretical = _law_row(row, [window.position(-k) for k in config.offsets], config.offsets)
    return ReplicaSample(empirical, theoretical)


def wishart_bulk(config: ExperimentConfig, stream: RandomStream) -> ReplicaSample:
    """|Omega_{i, i-k}| at the Marchenko-Pastur anchor E T vs the bulk law in Wishart units."""
    assert config.energy is not None and config.offsets is not None and config.q is not None
    before, after = _wishart_pair(config, stream.child(EMPIRICAL).generator())
    anchor = anchor_index(before.eigenvalues, config.energy * config.wishart_t)
    empirical = _column_overlaps(overlap_matrix(after, before).entries, anchor, config.offsets)
    sine = sample_sine(_process(config), stream.child(THEORETICAL).generator())
    window = sine.rescaled(1.0 / (config.q * config.calibration))
    h = h_overlap_wishart(config.energy, config.q, config.calibration)
    row = bulk_overlap_row(window, h, ANCHORED_BRANCH)
    theoretical = _law_row(row, [window.position(-k) for k in config.offsets], config.offsets)
    return ReplicaSample(empirical, theoretical)


def wishart_hard_edge(config: ExperimentConfig, stream: RandomStream) -> ReplicaSample:
    """|Omega_{i, i-k}| near the hard edge vs the hard-edge law with chi ~ chi-square(alpha)."""
    assert config.offsets is not None and config.reference_index is not None and config.alpha is not None
    index = config.reference_index
    before, after = _wishart_pair(config, stream.child(EMPIRICAL).generator())
    empirical = _column_overlaps(overlap_matrix(after, before).entries, index - 1, config.offsets)
    rng = stream.child(THEORETICAL).generator()
    window = sample_bessel(_process(config), rng)
    row = hard_edge_overlap_row(window, float(rng.chisquare(config.alpha)), index)
    theoretical = _law_row(row, [window.position(index - k) for k in config.offsets], config.offsets)
    return ReplicaSample(empirical, theoretical)


def _edge_rows(n: int, side: Side, i: int, j: int) -> tuple[int, int, int]:
    """0-based (row, column, partner column) of the 1-based edge pair (i, j), counted from the edge."""
    if side == Side.left:
        return i - 1, j - 1, i - 1
    return n + 1 - i, n - j, n - i


def soft_edge(config: ExperimentConfig, stream: RandomStream) -> ReplicaSample:
    """Signed N^{1/3}(Omega - I)_{ij} for edge index pairs vs the edge law on an Airy window."""
    assert config.pairs is not None and config.side is not None
    wishart = config.kind == ExperimentKind.wishart_soft_edge
    pair_of = _wishart_pair if wishart else _wigner_pair
    before, after = pair_of(config, stream.child(EMPIRICAL).generator())
    entries = overlap_matrix(after, before).entries
    window = sample_airy(_process(config), stream.child(THEORETICAL).generator())
    if wishart:
        assert config.q is not None
        law = wishart_soft_edge_overlap_law(window, config.q, config.side)
    else:
        law = edge_overlap_law(window)
    scale = config.n ** (1.0 / 3.0)
    empirical, theoretical = {}, {}
    for i, j in config.pairs:
        row, column, partner = _edge_rows(config.n, config.side, i, j)
        pivot = entries[row, partner]
        value = entries[row, column] * np.conj(pivot) / abs(pivot)
        empirical[f"{i}:{j}"] = _values([scale * (value - (1.0 if i == j else 0.0))])
        theoretical[f"{i}:{j}"] = _values([law[i - 1, j - 1]])
    return ReplicaSample(empirical, theoretical)


def _edge_increment(before: NDArray[np.float64], after: NDArray[np.float64], side: Side, index: int) -> float:
    """New minus old eigenvalue at the 1-based edge index, counted from ``side``."""
    if side == Side.left:
        return float(after[index - 1] - before[index - 1])
    return float(after[-index] - before[-index])


def _edge_spectra(config: ExperimentConfig, rng: np.random.Generator) -> tuple[NDArray[np.float64], ...]:
    spec = config.ensemble()
    if spec.is_wishart:
        sample = sample_wishart(spec, rng)
        extended = extend_wishart(sample.x, sample_extension(spec, rng).border)
        return eig_values(sample.w), eig_values(extended.T @ extended)
    h = sample_wigner(spec, rng)
    return eig_values(h), eig_values(extend_wigner(h, sample_extension(spec, rng)))


def edge_gap(config: ExperimentConfig, stream: RandomStream) -> ReplicaSample:
    """Scaled edge increment at ``edge_index`` vs a draw from the Gamma gap law."""
    assert config.side is not None
    before, after = _edge_spectra(config, stream.child(EMPIRICAL).generator())
    increment = _edge_increment(before, after, config.side, config.edge_index)
    if config.kind == ExperimentKind.gap_law_wishart:
        scale = wishart_gap_scale(config.effective_q, config.side)
    else:
        scale = math.sqrt(config.n) * (-1.0 if config.side == Side.left else 1.0)
    label = str(config.edge_index)
    draw = gap_law(config.beta).rvs(random_state=stream.child(THEORETICAL).generator())
    return ReplicaSample({label: np.array([scale * increment])}, {label: np.array([float(draw)])})


def band_tail(config: ExperimentConfig, stream: RandomStream) -> ReplicaSample:
    """Tail mass sum_{|i-j| >= k} |Omega_ij|^2 averaged over the central half of the rows."""
    before, after = _wigner_pair(config, stream.child(EMPIRICAL).generator())
    weights = np.abs(overlap_matrix(after, before).entries[:, : config.n]) ** 2
    rows = np.arange(config.n // 4, 3 * config.n // 4)
    distance = np.abs(rows[:, None] - np.arange(config.n)[None, :])
    central = weights[rows]
    empirical = {}
    for k in range(1, config.n // 2 + 1):
        empirical[str(k)] = np.array([float(np.mean(np.sum(np.where(distance >= k, central, 0.0), axis=1)))])
    return ReplicaSample(empirical)


def _grow(config: ExperimentConfig, rng: np.random.Generator) -> tuple[SpectralData, SpectralData]:
    spec = config.ensemble()
    h = sample_wigner(spec, rng)
    before = eig_dense(h)
    for step in range(config.steps or 1):
        h = extend_wigner(h, sample_extension(spec.model_copy(update={"n": config.n + step}), rng))
    return before, eig_dense(h)


def beadchain_kstep(config: ExperimentConfig, stream: RandomStream) -> ReplicaSample:
    """|<u^(N+K)_{a_K}, u^(N)_{a_0 - k}>| with per-level anchors vs the K-step bead-chain basis."""
    assert config.energy is not None and config.offsets is not None and config.steps is not None
    before, after = _grow(config, stream.child(EMPIRICAL).generator())
    threshold = config.energy * math.sqrt(config.n)
    first, last = anchor_index(before.eigenvalues, threshold), anchor_index(after.eigenvalues, threshold)
    entries = after.eigenvectors.conj().T[:, : config.n] @ before.eigenvectors
    columns = [first - k for k in config.offsets]
    if min(columns) < 0 or max(columns) >= config.n:
        raise SpecificationError(f"offsets {config.offsets} around index {first} leave the spectrum")
    empirical = {str(k): np.array([abs(entries[last, c])]) for k, c in zip(config.offsets, columns, strict=True)}
    rng = stream.child(THEORETICAL).generator()
    final = run_bulk_chain(sample_sine(_process(config), rng), h_wigner(config.energy), config.steps, rng)[-1]
    theoretical = {str(k): np.array([abs(final.basis.entry(0, -k))]) for k in config.offsets}
    return ReplicaSample(empirical, theoretical)


REPLICAS: dict[ExperimentKind, Callable[[ExperimentConfig, RandomStream], ReplicaSample]] = {
    ExperimentKind.wigner_bulk_mean_profile: wigner_bulk,
    ExperimentKind.wigner_bulk_hist: wigner_bulk,
    ExperimentKind.wigner_edge: soft_edge,
    ExperimentKind.wishart_soft_edge: soft_edge,
    ExperimentKind.wishart_hard_edge: wishart_hard_edge,
    ExperimentKind.wishart_bulk: wishart_bulk,
    ExperimentKind.gap_law_wigner: edge_gap,
    ExperimentKind.gap_law_wishart: edge_gap,
    ExperimentKind.band_decay: band_tail,
    ExperimentKind.beadchain_kstep: beadchain_kstep,
}
