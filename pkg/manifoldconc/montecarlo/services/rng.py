"""Counter-based random substreams keyed by (master seed, stream, chunk)."""
from typing import NamedTuple

import numpy as np

from core.exceptions import ConfigError


class Chunk(NamedTuple):
    """A contiguous block of global sample indices [start, start + size)."""

    index: int
    start: int
    size: int

    @property
    def stop(self):
        return self.start + self.size


def require_seed(seed):
    """Master seeds are mandatory non-negative integers; there is no entropy default."""
    if seed is None:
        raise ConfigError('a master seed is required')
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ConfigError(f'the master seed must be a non-negative integer, got {seed!r}')
    return int(seed)


def substream(seed, stream, chunk=0):
    """Philox generator for chunk ``chunk`` of stream ``stream``.

    The same triple always yields the same generator, independent of how
    chunks are later scheduled.
    """
    sequence = np.random.SeedSequence(require_seed(seed), spawn_key=(int(stream), int(chunk)))
    return np.random.Generator(np.random.Philox(sequence))


def chunks(total, chunk_size):
    """Split ``total`` samples into consecutive chunks of at most ``chunk_size``."""
    if chunk_size < 1:
        raise ConfigError(f'chunk size must be positive, got {chunk_size}')
    return [Chunk(index, start, min(chunk_size, total - start))
            for index, start in enumerate(range(0, total, chunk_size))]
