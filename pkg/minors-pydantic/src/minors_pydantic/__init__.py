from .constants import ARTIFACT_VERSION, FAILURE_BUDGET
from .ensemble import EnsembleSpec
from .experiment import KIND_DEFAULTS, ExperimentConfig
from .offsets import IndexPairs, Offsets
from .process import ProcessSpec
from .result import ExperimentResult, Histogram, Moments, OffsetResult, RunManifest
from .shared import Approximant, AuxiliaryRegime, EntryLaw, ExperimentKind, ProcessKind, Side

__all__ = [
    "ARTIFACT_VERSION",
    "Approximant",
    "AuxiliaryRegime",
    "EnsembleSpec",
    "EntryLaw",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "FAILURE_BUDGET",
    "Histogram",
    "IndexPairs",
    "KIND_DEFAULTS",
    "Moments",
    "OffsetResult",
    "Offsets",
    "ProcessKind",
    "ProcessSpec",
    "RunManifest",
    "Side",
]
