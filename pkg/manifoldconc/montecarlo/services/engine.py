"""
Chunk-parallel sampling.

Each chunk draws from its own substream and the results come back in chunk
order, so any reduction over them is the same for every worker count.
"""
import logging
import os

from joblib import Parallel, delayed

from core.constants import DEFAULT_CHUNK_SIZE, MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL
from core.exceptions import ConfigError
from grassmann import services as grassmann
from stiefel import services as stiefel

from .rng import chunks, substream

logger = logging.getLogger(__name__)

SAMPLERS = {
    MANIFOLD_STIEFEL: stiefel.sample_uniform_batch,
    MANIFOLD_GRASSMANN: grassmann.sample_uniform_batch,
}


def resolve_threads(threads=None):
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ConfigError(f'thread count must be positive, got {threads}')
    return int(threads)


def sample_batch(manifold, n, d, size, rng):
    """Uniform samples stacked along axis 0: frames on W_{n,d}, projections on G_{n,d}."""
    sampler = SAMPLERS.get(manifold)
    if sampler is None:
        raise ConfigError(f'unknown manifold {manifold!r}')
    return sampler(n, d, size, rng)


def map_chunks(worker, total, seed, stream, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """[worker(chunk, rng) for each chunk], in chunk order."""
    plan = chunks(total, chunk_size)
    threads = resolve_threads(threads)
    logger.debug('Dispatching %d chunk(s) of stream %d over %d thread(s)', len(plan), stream, threads)
    if threads == 1 or len(plan) == 1:
        return [worker(chunk, substream(seed, stream, chunk.index)) for chunk in plan]
    return Parallel(n_jobs=min(threads, len(plan)), backend='threading')(
        delayed(worker)(chunk, substream(seed, stream, chunk.index)) for chunk in plan
    )


def map_samples(worker, manifold, n, d, total, seed, stream, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """Like map_chunks, with ``worker(chunk, batch, rng)`` handed the chunk's uniform samples."""

    def run(chunk, rng):
        return worker(chunk, sample_batch(manifold, n, d, chunk.size, rng), rng)

    return map_chunks(run, total, seed, stream, chunk_size, threads)
