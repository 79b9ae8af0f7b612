"""Counter-based random number streams.

Reproducibility contract: a stream is identified by ``(seed, stream_id)``.
Two streams with the same pair produce identical draw sequences; distinct
pairs are statistically independent.  Streams are realized as numpy
Generators over Philox with ``key = [seed, stream_id]``, so stream creation
is cheap and order-free: a batch can hand stream i to walk i and get the
same numbers no matter which thread runs which walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class RngStream:
    """A named, reproducible random stream.

    seed:       nonnegative master seed (< 2**64).
    stream_id:  nonnegative substream index (< 2**64).
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError(f"seed out of range: {self.seed}")
        if not (0 <= int(self.stream_id) < 2**64):
            raise ValueError(f"stream_id out of range: {self.stream_id}")
        self._gen = np.random.Generator(
            np.random.Philox(key=np.array([self.seed, self.stream_id], dtype=np.uint64))
        )

    @property
    def generator(self) -> np.random.Generator:
        """The underlying numpy Generator (stateful; draws advance it)."""
        return self._gen

    def uniform(self) -> float:
        return self._gen.random()

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def integers(self, low: int, high: int) -> int:
        """One integer uniform on [low, high)."""
        return int(self._gen.integers(low, high))


def derive_seed(master: int, *path: int) -> int:
    """Derive a child seed from a master seed and an integer path.

    Children for distinct paths are independent; the derivation does not
    depend on the order in which children are requested.
    """
    ss = np.random.SeedSequence(master, spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
