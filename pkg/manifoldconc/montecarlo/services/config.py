"""Experiment configuration."""
import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.constants import (
    ALL_MANIFOLDS,
    ALL_SUBSPACE_MODES,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_PREPASS_SAMPLES,
    MANIFOLD_STIEFEL,
    MIN_SAMPLES,
    OPNORM_MAX_ITER,
    OPNORM_RESTARTS,
    SUBSPACE_ONTO,
)
from core.exceptions import ConfigError

from .rng import require_seed


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines the numbers an experiment produces.

    The thread count is absent: it never changes a result. A missing grid is
    derived from the bound curve when the experiment runs.
    """

    n: int
    d: int
    samples: int
    seed: int
    grid: Optional[tuple] = None
    manifold: str = MANIFOLD_STIEFEL
    bound: Optional[str] = None
    functional: Optional[str] = None
    chunk_size: int = DEFAULT_CHUNK_SIZE
    prepass_samples: int = DEFAULT_PREPASS_SAMPLES
    order: int = 3
    mode: str = SUBSPACE_ONTO
    rank: Optional[int] = None
    matrix: Optional[str] = None
    opnorm_restarts: int = OPNORM_RESTARTS
    opnorm_max_iter: int = OPNORM_MAX_ITER

    def __post_init__(self):
        object.__setattr__(self, 'seed', require_seed(self.seed))
        if self.manifold not in ALL_MANIFOLDS:
            raise ConfigError(f'unknown manifold {self.manifold!r}; expected one of {ALL_MANIFOLDS}')
        if not 1 <= self.d <= self.n:
            raise ConfigError(f'need 1 <= d <= n, got n={self.n}, d={self.d}')
        if self.samples < MIN_SAMPLES:
            raise ConfigError(f'at least {MIN_SAMPLES} samples are required, got {self.samples}')
        if self.chunk_size < 1:
            raise ConfigError(f'chunk size must be positive, got {self.chunk_size}')
        if self.prepass_samples < 2:
            raise ConfigError(f'the norm pre-pass needs at least 2 samples, got {self.prepass_samples}')
        if self.order < 1:
            raise ConfigError(f'chaos order must be at least 1, got {self.order}')
        if self.opnorm_restarts < 0 or self.opnorm_max_iter < 1:
            raise ConfigError('operator-norm power iteration needs restarts >= 0 and max_iter >= 1')
        if self.mode not in ALL_SUBSPACE_MODES:
            raise ConfigError(f'unknown subspace mode {self.mode!r}; expected one of {ALL_SUBSPACE_MODES}')
        if self.rank is not None and not 1 <= self.rank <= self.n:
            raise ConfigError(f'subspace rank must lie in [1, n], got {self.rank}')
        if self.grid is None:
            return
        grid = tuple(float(t) for t in np.atleast_1d(np.asarray(self.grid, dtype=float)))
        if not grid:
            raise ConfigError('the t-grid is empty')
        if not np.all(np.isfinite(grid)) or grid[0] < 0:
            raise ConfigError('t-grid values must be finite and non-negative')
        if np.any(np.diff(grid) <= 0):
            raise ConfigError('the t-grid must be strictly increasing')
        object.__setattr__(self, 'grid', grid)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def as_dict(self):
        data = dataclasses.asdict(self)
        data['grid'] = None if self.grid is None else list(self.grid)
        return data


def linear_grid(stop, points=100, start=0.0):
    """``points`` equally spaced t values from ``start`` to ``stop``."""
    if points < 1 or stop <= start:
        raise ConfigError(f'cannot build a grid of {points} points on [{start}, {stop}]')
    return tuple(float(t) for t in np.linspace(start, stop, points))
