import pickle
import warnings

import pytest
from minors_core.errors import ConvergenceError, DegenerateGapError, WindowError
from minors_core.settings import MinorsSettings
from minors_core.warns import ApproximantWarning, ignore, strict


@pytest.mark.parametrize(
    "error",
    [WindowError(1, 8, 12), ConvergenceError("dense eigensolver failed", {"size": 3}), DegenerateGapError(1e-15)],
)
def test_errors_survive_pickling(error: Exception) -> None:
    restored = pickle.loads(pickle.dumps(error))
    assert type(restored) is type(error)
    assert str(restored) == str(error)


def test_strict_turns_warnings_into_errors() -> None:
    with strict(), pytest.raises(ApproximantWarning, match="more than half"):
        warnings.warn(ApproximantWarning(300, 400), stacklevel=1)


def test_ignore_silences_warnings() -> None:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        with ignore():
            warnings.warn(ApproximantWarning(300, 400), stacklevel=1)
    assert caught == []


def test_settings_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("MINORS_WORKERS", "3")
    monkeypatch.setenv("MINORS_PROGRESS", "false")
    settings = MinorsSettings()
    assert settings.workers == 3
    assert not settings.progress
