import math

import numpy as np
import pytest
from minors_core.limits import SINE_DENSITY, gaussian_marks
from minors_core.secular import PointConfiguration
from minors_core.streams import RandomStream
from minors_pydantic import ProcessKind


@pytest.fixture
def rng() -> np.random.Generator:
    return RandomStream(2024).generator()


@pytest.fixture
def bulk_window(rng: np.random.Generator) -> PointConfiguration:
    """A jittered lattice with the bulk spacing, marked and symmetric around offset 0."""
    offsets = np.arange(-20, 21, dtype=np.intp)
    points = 2.0 * math.pi * offsets + rng.uniform(-1.0, 1.0, offsets.size)
    return PointConfiguration(
        points=points,
        offsets=offsets,
        marks=gaussian_marks(offsets.size, 1, rng),
        kind=ProcessKind.sine,
        density=SINE_DENSITY,
    )
