"""
Per-path uniform random streams.

Path i of a run with seed s draws from ``np.random.default_rng([s, i])``; uniforms
are taken in chunks, so a path's sequence does not depend on which batch or worker
simulates it, nor on how many uniforms its neighbours consume.
"""

import logging

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 1024


class UniformStreams:
    """One independent uniform stream per path index."""

    def __init__(self, seed: int, indices, chunk: int = DEFAULT_CHUNK):
        if chunk < 1:
            raise ValueError(f"chunk must be positive, got {chunk}")
        self.seed = int(seed)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.chunk = chunk
        self._generators = [np.random.default_rng([self.seed, int(i)]) for i in self.indices]
        self._buffer = np.empty((len(self.indices), chunk))
        self._position = np.full(len(self.indices), chunk)

    def __len__(self) -> int:
        return len(self.indices)

    def _refill(self, rows: np.ndarray) -> None:
        for r in rows:
            self._buffer[r] = self._generators[r].random(self.chunk)
        self._position[rows] = 0

    def draw(self, rows=None) -> np.ndarray:
        """Next uniform of every selected stream (all streams by default)."""
        rows = np.arange(len(self)) if rows is None else np.asarray(rows, dtype=np.intp)
        exhausted = rows[self._position[rows] >= self.chunk]
        if exhausted.size:
            self._refill(exhausted)
        out = self._buffer[rows, self._position[rows]]
        self._position[rows] += 1
        return out
