from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RandomStream:
    """Counter-based, splittable random stream.

    A stream is a value: the same ``(seed, key)`` always yields the same draws, whichever
    process or thread asks for them.

    >>> replica = RandomStream(7).child(42)
    >>> empirical, theoretical = replica.child(0), replica.child(1)
    """

    seed: int
    key: tuple[int, ...] = ()

    def child(self, *key: int) -> RandomStream:
        return RandomStream(self.seed, self.key + key)

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.Philox(sequence))
