from enum import StrEnum


class EntryLaw(StrEnum):
    """Law of the matrix entries, always centered with unit variance."""

    gaussian = "gaussian"
    rademacher = "rademacher"
    uniform = "uniform"


class ProcessKind(StrEnum):
    sine = "sine"
    airy = "airy"
    bessel = "bessel"


class Approximant(StrEnum):
    """How a limiting process is approximated by a finite matrix."""

    tridiagonal = "tridiagonal"
    dense = "dense"


class Side(StrEnum):
    left = "left"
    right = "right"


class ExperimentKind(StrEnum):
    wigner_bulk_mean_profile = "wigner_bulk_mean_profile"
    wigner_bulk_hist = "wigner_bulk_hist"
    wigner_edge = "wigner_edge"
    wishart_soft_edge = "wishart_soft_edge"
    wishart_hard_edge = "wishart_hard_edge"
    wishart_bulk = "wishart_bulk"
    gap_law_wigner = "gap_law_wigner"
    gap_law_wishart = "gap_law_wishart"
    band_decay = "band_decay"
    beadchain_kstep = "beadchain_kstep"


class AuxiliaryRegime(StrEnum):
    edge_bulk = "edge_bulk"
    bulk_off = "bulk_off"
    new_direction = "new_direction"
