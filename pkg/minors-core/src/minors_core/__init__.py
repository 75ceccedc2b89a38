from .beadchain import ChainState, Transition, run_bulk_chain, run_hard_edge_chain, trajectory_rows
from .ensembles import (
    MinorExtension,
    WishartSample,
    eigen_coordinates,
    extend_wigner,
    extend_wishart,
    principal_minor,
    sample_extension,
    sample_wigner,
    sample_wishart,
)
from .errors import MinorsError, ReplicaFailureError, SpecificationError
from .montecarlo import band_decay_experiment, gap_experiment, run_experiment
from .secular import BasisState, PointConfiguration
from .settings import MinorsSettings
from .spectral import ArrowheadProblem, OverlapMatrix, SpectralData, arrowhead_eigen, eig_dense, overlap_matrix
from .streams import RandomStream

__all__ = [
    "ArrowheadProblem",
    "BasisState",
    "ChainState",
    "MinorExtension",
    "MinorsError",
    "MinorsSettings",
    "OverlapMatrix",
    "PointConfiguration",
    "RandomStream",
    "ReplicaFailureError",
    "SpecificationError",
    "SpectralData",
    "Transition",
    "WishartSample",
    "arrowhead_eigen",
    "band_decay_experiment",
    "eig_dense",
    "eigen_coordinates",
    "extend_wigner",
    "extend_wishart",
    "gap_experiment",
    "overlap_matrix",
    "principal_minor",
    "run_bulk_chain",
    "run_experiment",
    "run_hard_edge_chain",
    "sample_extension",
    "sample_wigner",
    "sample_wishart",
    "trajectory_rows",
]
