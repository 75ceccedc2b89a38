"""Monte Carlo comparison of finite-N minors against their limiting laws."""

from .experiments import REPLICAS, ReplicaSample, labels
from .runner import band_decay_experiment, gap_experiment, run_experiment, run_replica
from .statistics import histogram, ks_statistic, moments, shared_edges, top_bin_mass, unit_histogram

__all__ = [
    "REPLICAS",
    "ReplicaSample",
    "band_decay_experiment",
    "gap_experiment",
    "histogram",
    "ks_statistic",
    "labels",
    "moments",
    "run_experiment",
    "run_replica",
    "shared_edges",
    "top_bin_mass",
    "unit_histogram",
]
