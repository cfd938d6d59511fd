"""Seeded, splittable random streams on a counter-based bit generator."""

from __future__ import annotations

import numpy as np


class RandomStream:
    """Deterministic random stream with independently derivable substreams.

    The same (seed, key) always yields the same draws, and substreams
    derived by index are mutually independent, so replicates and simulation
    blocks can be generated in any order (or in parallel) without changing
    the result.
    """

    __slots__ = ("seed", "key")

    def __init__(self, seed, key=()):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)

    def substream(self, *indices) -> "RandomStream":
        return RandomStream(self.seed, self.key + tuple(int(i) for i in indices))

    def generator(self) -> np.random.Generator:
        # fresh generator every call: state never leaks between uses
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.Philox(ss))

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, key={self.key})"

    def __eq__(self, other):
        return (
            isinstance(other, RandomStream)
            and self.seed == other.seed
            and self.key == other.key
        )

    def __hash__(self):
        return hash((self.seed, self.key))
