# -*- coding: utf-8 -*-
import logging

import numpy as np

from singmc.errors import DomainError

logger = logging.getLogger(__name__)
logger.debug("importing...")


class RngStream:
    """
    Seedable, reproducible random stream on numpy's PCG64.

    The stream is identified by (seed, stream_id); the SeedSequence spawn key makes distinct stream ids
    statistically independent, and the same pair gives the same variates on every platform. A stream is
    single-owner state: hand it to one worker, never share it.
    """

    def __init__(self, seed: int, stream_id: int = 0, _spawn_key=None):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        if self.seed < 0 or self.stream_id < 0:
            raise DomainError(f"seed and stream_id must be non-negative, got {self.seed}, {self.stream_id}")
        self.spawn_key = tuple(_spawn_key) if _spawn_key is not None else (self.stream_id,)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def substream(self, key: int) -> "RngStream":
        """An independent child stream, e.g. one per worker."""
        return RngStream(self.seed, self.stream_id, _spawn_key=self.spawn_key + (int(key),))

    def uniform(self, size=None):
        """Uniform on the open interval (0, 1)."""
        u = self.generator.random(size)
        if size is None:
            while u == 0.0:
                u = self.generator.random()
            return u
        bad = u == 0.0
        while bad.any():
            u[bad] = self.generator.random(int(bad.sum()))
            bad = u == 0.0
        return u

    def standard_gamma(self, shape, size=None):
        return self.generator.standard_gamma(shape, size)

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def signs(self, size):
        return self.generator.integers(0, 2, size=size) * 2.0 - 1.0

    def __repr__(self):
        return f"RngStream(seed={self.seed}, spawn_key={self.spawn_key})"


logger.debug("imported")
