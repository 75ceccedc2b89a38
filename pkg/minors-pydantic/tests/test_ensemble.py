import pytest
from minors_pydantic import EnsembleSpec, ProcessKind, ProcessSpec
from pydantic import ValidationError


def test_wigner_ensemble() -> None:
    spec = EnsembleSpec(n=10, beta=2)
    assert not spec.is_wishart
    with pytest.raises(ValueError, match="aspect ratio"):
        _ = spec.q


def test_wishart_needs_at_least_n_rows() -> None:
    with pytest.raises(ValidationError, match="T must be at least N"):
        EnsembleSpec(n=10, t=5)


def test_wishart_is_real() -> None:
    with pytest.raises(ValidationError, match="beta must be 1"):
        EnsembleSpec(n=10, t=20, beta=2)


def test_process_defaults() -> None:
    spec = ProcessSpec(kind=ProcessKind.sine)
    assert spec.size == 2000
    assert spec.half_width == 128
    assert spec.points_needed == 257
    assert spec.refined().size == 4000


def test_process_window_must_fit() -> None:
    with pytest.raises(ValidationError, match="exceeds"):
        ProcessSpec(kind=ProcessKind.sine, window=1000, approximant_size=2000)


def test_bessel_is_real() -> None:
    with pytest.raises(ValidationError, match="beta must be 1"):
        ProcessSpec(kind=ProcessKind.bessel, beta=2)
