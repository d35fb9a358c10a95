"""Counter-based random streams.

Every random draw in the package comes from a Philox generator keyed by a
tuple of integers, so graph sampling, walking and resampling use independent
streams that do not depend on scheduling order.
"""

from __future__ import annotations

import numpy as np

# stream tags
GRAPH = 0
WALK = 1
EXTEND = 2
START = 3
PAIRS = 4
BOOTSTRAP = 5

CHUNK = 1 << 16


def make_rng(*keys: int) -> np.random.Generator:
    """Philox generator keyed by ``keys`` (e.g. ``(seed, GRAPH)``)."""
    words = [int(k) & 0xFFFFFFFFFFFFFFFF for k in keys]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


class UniformStream:
    """Buffered stream of uniforms on [0, 1) consumed by the compiled kernels.

    The buffer is always refilled in chunks of ``CHUNK`` draws, so the sequence
    a kernel sees is independent of how often it is interrupted.
    """

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.buf = rng.random(CHUNK)
        self.pos = 0

    def ensure(self, k: int = 1) -> None:
        """Make at least ``k`` unread uniforms available."""
        left = self.buf.shape[0] - self.pos
        if left >= k:
            return
        fresh = self.rng.random(CHUNK)
        self.buf = np.concatenate([self.buf[self.pos:], fresh])
        self.pos = 0

    def copy(self) -> "UniformStream":
        other = object.__new__(UniformStream)
        other.rng = np.random.Generator(type(self.rng.bit_generator)())
        other.rng.bit_generator.state = self.rng.bit_generator.state
        other.buf = self.buf.copy()
        other.pos = self.pos
        return other
