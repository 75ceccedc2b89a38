"""Replicated experiments: map over replicas, reduce into an :class:`ExperimentResult`.

Replicas are collected in replica order whatever the worker count, so every reduction sees
the same sequence of values and the summary is bit-identical across schedules.
"""

from __future__ import annotations

import functools
import logging
import math
import multiprocessing
import sys
import time
import traceback
import warnings
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import scipy.stats
from minors_pydantic import ExperimentConfig, ExperimentKind, ExperimentResult, Moments, OffsetResult
from numpy.typing import NDArray
from returns.result import Failure, ResultE, Success
from tqdm import tqdm

from ..errors import NUMERICAL_FAILURES, ReplicaFailureError, SpecificationError
from ..laws import gap_law, gap_law_constants
from ..settings import MinorsSettings
from ..streams import RandomStream
from ..warns import ReplicaFailureWarning
from .experiments import REPLICAS, ReplicaSample, labels
from .statistics import histogram, ks_statistic, moments, top_bin_mass

logger = logging.getLogger(__name__)

GAP_KINDS = frozenset({ExperimentKind.gap_law_wigner, ExperimentKind.gap_law_wishart})
BAND_FIT_START = 4
"""Band decay fits k in [BAND_FIT_START, N // 4]."""


def run_replica(config: ExperimentConfig, replica: int) -> ResultE[ReplicaSample]:
    """One replica, deterministic in ``(config.seed, replica)``.

    Numerical failures come back as ``Failure``; anything else is a bug and propagates.
    """
    stream = RandomStream(config.seed).child(replica)
    try:
        return Success(REPLICAS[config.kind](config, stream))
    except NUMERICAL_FAILURES as error:
        return Failure(error)


def _chunksize(replicas: int, workers: int) -> int:
    return max(1, replicas // (8 * workers))


def _collect(config: ExperimentConfig, workers: int, progress: bool) -> list[ResultE[ReplicaSample]]:
    task = functools.partial(run_replica, config)
    replicas = range(config.replicas)

    def counted(outcomes: Iterable[ResultE[ReplicaSample]]) -> list[ResultE[ReplicaSample]]:
        bar = tqdm(outcomes, total=config.replicas, desc=str(config.kind), file=sys.stderr, disable=not progress)
        return list(bar)

    logger.info("running %d replicas of %s on %d worker(s)", config.replicas, config.kind, workers)
    if workers == 1:
        return counted(map(task, replicas))
    with ProcessPoolExecutor(max_workers=workers, mp_context=multiprocessing.get_context("spawn")) as pool:
        return counted(pool.map(task, replicas, chunksize=_chunksize(config.replicas, workers)))


def _successes(outcomes: list[ResultE[ReplicaSample]]) -> list[ReplicaSample]:
    samples: list[ReplicaSample] = []
    for replica, outcome in enumerate(outcomes):
        match outcome:
            case Success(sample):
                samples.append(sample)
            case Failure(e):
                logger.error("replica %d failed: %s", replica, traceback.format_exception(e))
            case x:
                raise AssertionError(f"Expected code to be unreachable {x}")
    return samples


def _stack(samples: list[ReplicaSample], side: str, label: str) -> NDArray[np.float64]:
    parts = [getattr(sample, side)[label] for sample in samples]
    return np.concatenate(parts) if parts else np.empty(0)


def _identify(label: str) -> tuple[int | None, tuple[int, int] | None]:
    """(offset, pair) of a label such as ``"-1"`` or ``"1:2"``."""
    if ":" in label:
        i, j = label.split(":")
        return None, (int(i), int(j))
    return int(label), None


def _compare(config: ExperimentConfig, samples: list[ReplicaSample], label: str) -> OffsetResult:
    empirical, theoretical = _stack(samples, "empirical", label), _stack(samples, "theoretical", label)
    shared = histogram(empirical, theoretical, config.bins)
    offset, pair = _identify(label)
    mass = top_bin_mass(empirical, shared.edges) if config.kind == ExperimentKind.wigner_bulk_hist else None
    return OffsetResult(
        offset=offset,
        pair=pair,
        histogram=shared,
        ks=ks_statistic(empirical, theoretical),
        empirical=moments(empirical),
        theoretical=moments(theoretical),
        top_bin_mass=mass,
    )


def _gap_metrics(config: ExperimentConfig, samples: list[ReplicaSample]) -> dict[str, float]:
    scaled = _stack(samples, "empirical", str(config.edge_index))
    constants = gap_law_constants(config.beta)
    return {
        "ks_exact": float(scipy.stats.kstest(scaled, gap_law(config.beta).cdf).statistic),
        "target_mean": constants.mean,
        "target_variance": constants.variance,
    }


def _band_fit(config: ExperimentConfig, samples: list[ReplicaSample]) -> tuple[list[OffsetResult], dict[str, float]]:
    """Least-squares fit of log(tail mass) against log k, with C the geometric mean of k * tail mass."""
    ks = np.arange(1, config.n // 2 + 1)
    stacks = [_stack(samples, "empirical", str(k)) for k in ks]
    means = np.array([math.fsum(stack) / stack.size for stack in stacks])
    fitted = (ks >= BAND_FIT_START) & (ks <= config.n // 4)
    if np.any(means[fitted] <= 0.0):
        raise SpecificationError("band tail mass vanished inside the fit range")
    log_k, log_mass = np.log(ks[fitted]), np.log(means[fitted])
    slope, _ = np.polyfit(log_k, log_mass, 1)
    constant = float(np.exp(np.mean(log_mass + log_k)))
    offsets = [
        OffsetResult(
            offset=int(k),
            empirical=moments(stack),
            theoretical=Moments(count=0, mean=constant / float(k), variance=0.0),
        )
        for k, stack in zip(ks, stacks, strict=True)
    ]
    return offsets, {"slope": float(slope), "constant": constant}


def _summarize(config: ExperimentConfig, samples: list[ReplicaSample]) -> tuple[list[OffsetResult], dict[str, float]]:
    if not samples:
        return [], {}
    if config.kind == ExperimentKind.band_decay:
        return _band_fit(config, samples)
    offsets = [_compare(config, samples, label) for label in labels(config)]
    metrics = _gap_metrics(config, samples) if config.kind in GAP_KINDS else {}
    return offsets, metrics


def run_experiment(
    config: ExperimentConfig, *, workers: int | None = None, progress: bool | None = None
) -> ExperimentResult:
    """Runs ``config.replicas`` replicas and compares the empirical and theoretical samples.

    ``workers`` and ``progress`` default to :class:`MinorsSettings`; neither changes the result.

    Raises:
        ReplicaFailureError: If more than 0.1% of the replicas fail. The partial result is attached.
    """
    settings = MinorsSettings()
    workers = workers or settings.workers
    progress = settings.progress if progress is None else progress
    started = time.perf_counter()
    outcomes = _collect(config, workers, progress)
    samples = _successes(outcomes)
    offsets, metrics = _summarize(config, samples)
    result = ExperimentResult(
        kind=config.kind,
        config=config,
        replicas=config.replicas,
        failures=len(outcomes) - len(samples),
        offsets=offsets,
        metrics=metrics,
        runtime_seconds=time.perf_counter() - started,
    )
    if not result.within_failure_budget:
        raise ReplicaFailureError(result)
    if result.failures:
        warnings.warn(ReplicaFailureWarning(result.failures, result.replicas), stacklevel=2)
    logger.info("%s finished in %.2fs", config.kind, result.runtime_seconds)
    return result


def gap_experiment(
    config: ExperimentConfig, *, workers: int | None = None, progress: bool | None = None
) -> ExperimentResult:
    """Scaled edge increments vs the Gamma gap law, with the exact one-sample KS in ``metrics``."""
    if config.kind not in GAP_KINDS:
        raise SpecificationError(f"gap_experiment needs a gap-law kind, got {config.kind}")
    return run_experiment(config, workers=workers, progress=progress)


def band_decay_experiment(
    config: ExperimentConfig, *, workers: int | None = None, progress: bool | None = None
) -> ExperimentResult:
    """Fitted decay of the band tail mass; ``metrics`` holds ``slope`` and ``constant``."""
    if config.kind != ExperimentKind.band_decay:
        raise SpecificationError(f"band_decay_experiment needs the band_decay kind, got {config.kind}")
    return run_experiment(config, workers=workers, progress=progress)
