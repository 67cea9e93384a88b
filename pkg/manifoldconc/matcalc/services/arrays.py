"""Validated dense matrices and tensors."""
import itertools
import logging
from dataclasses import dataclass

import numpy as np

from core.exceptions import DimensionMismatchError, PreconditionError

logger = logging.getLogger(__name__)


def as_matrix(value, name='matrix'):
    """Return ``value`` as a finite 2-D float array (1-D input becomes a column)."""
    array = np.array(value, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2 or array.size == 0:
        raise DimensionMismatchError(f'{name} must be a non-empty 2-D array, got shape {array.shape}')
    if not np.all(np.isfinite(array)):
        raise PreconditionError(f'{name} has non-finite entries')
    return array


def symmetrize_tensor(entries):
    """Average a cubical tensor over all permutations of its indices."""
    entries = np.asarray(entries, dtype=float)
    if entries.ndim <= 1:
        return entries.copy()
    if len(set(entries.shape)) != 1:
        raise DimensionMismatchError(f'only cubical tensors can be symmetrized, got {entries.shape}')
    perms = list(itertools.permutations(range(entries.ndim)))
    total = np.zeros_like(entries)
    for perm in perms:
        total += np.transpose(entries, perm)
    return total / len(perms)


@dataclass(frozen=True)
class DenseTensor:
    """Order-k array of finite reals, lexicographic index order."""

    entries: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim < 1 or entries.size == 0:
            raise DimensionMismatchError('a tensor needs order >= 1 and at least one entry')
        if not np.all(np.isfinite(entries)):
            raise PreconditionError('tensor has non-finite entries')
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def symmetrized(cls, entries):
        return cls(symmetrize_tensor(entries), symmetric=True)

    @property
    def order(self):
        return self.entries.ndim

    @property
    def dims(self):
        return self.entries.shape

    def check_symmetry(self, rng, samples=10, tol=1e-12):
        """Spot-check the symmetric flag on randomly drawn index permutations."""
        if self.order <= 1:
            return True
        if len(set(self.dims)) != 1:
            return False
        scale = max(1.0, float(np.max(np.abs(self.entries))))
        for _ in range(samples):
            perm = rng.permutation(self.order)
            if np.max(np.abs(np.transpose(self.entries, perm) - self.entries)) > tol * scale:
                return False
        return True
