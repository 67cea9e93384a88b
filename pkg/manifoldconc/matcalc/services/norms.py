"""Hilbert–Schmidt and operator norms of matrices and tensors."""
import logging
from typing import NamedTuple

import numpy as np

from core.constants import OPNORM_MAX_ITER, OPNORM_RESTARTS, OPNORM_TOL

from .arrays import DenseTensor

logger = logging.getLogger(__name__)


class OperatorNorm(NamedTuple):
    """Operator norm with its certification.

    ``exact`` is True for k ≤ 2. For k ≥ 3 ``value`` is the best multilinear
    value found (a certified lower bound) and ``upper`` is the HS norm.
    """

    value: float
    upper: float
    exact: bool

    @property
    def conservative(self):
        """The side of the bracket that never underestimates the norm."""
        return self.upper


def _entries(T):
    if isinstance(T, DenseTensor):
        return T.entries
    return DenseTensor(T).entries


def hs_norm(T):
    """(Σ entries²)^{1/2} for a tensor of any order."""
    return float(np.sqrt(np.sum(np.square(_entries(T)))))


def _contract_except(T, vectors, skip):
    out = T
    for axis in reversed(range(T.ndim)):
        if axis == skip:
            continue
        out = np.tensordot(out, vectors[axis], axes=([axis], [0]))
    return out


def _multilinear_value(T, vectors):
    out = T
    for axis in reversed(range(T.ndim)):
        out = np.tensordot(out, vectors[axis], axes=([axis], [0]))
    return float(out)


def _unfolding_start(T):
    """Leading left singular vector of every mode unfolding."""
    vectors = []
    for axis in range(T.ndim):
        unfolded = np.moveaxis(T, axis, 0).reshape(T.shape[axis], -1)
        u, _, _ = np.linalg.svd(unfolded, full_matrices=False)
        vectors.append(u[:, 0])
    return vectors


def _power_iteration(T, vectors, max_iter, tol):
    value = _multilinear_value(T, vectors)
    for _ in range(max_iter):
        for axis in range(T.ndim):
            update = _contract_except(T, vectors, axis)
            norm = np.linalg.norm(update)
            if norm == 0.0:
                return abs(value)
            vectors[axis] = update / norm
        new_value = _multilinear_value(T, vectors)
        if abs(new_value - value) <= tol * max(1.0, abs(new_value)):
            value = new_value
            break
        value = new_value
    return abs(value)


def op_norm(T, restarts=OPNORM_RESTARTS, max_iter=OPNORM_MAX_ITER, tol=OPNORM_TOL, seed=0):
    """sup of |T(x¹, …, xᵏ)| over unit vectors.

    k=1 and k=2 are exact. For k ≥ 3 alternating rank-one power iteration is
    run from the unfolding start and ``restarts`` random starts, and the best
    value is returned bracketed by the HS norm.
    """
    entries = _entries(T)
    upper = hs_norm(entries)
    if entries.ndim == 1:
        return OperatorNorm(upper, upper, True)
    if entries.ndim == 2:
        value = float(np.linalg.norm(entries, 2))
        return OperatorNorm(value, value, True)
    if upper == 0.0:
        return OperatorNorm(0.0, 0.0, True)

    rng = np.random.default_rng(seed)
    best = _power_iteration(entries, _unfolding_start(entries), max_iter, tol)
    for _ in range(restarts):
        start = []
        for size in entries.shape:
            x = rng.standard_normal(size)
            start.append(x / np.linalg.norm(x))
        best = max(best, _power_iteration(entries, start, max_iter, tol))
    logger.debug('Tensor op norm of order %d: [%.6g, %.6g]', entries.ndim, best, upper)
    return OperatorNorm(min(best, upper), upper, False)
