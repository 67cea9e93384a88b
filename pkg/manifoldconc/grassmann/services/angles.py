"""Principal angles and the Lipschitz behaviour of A ↦ AAᵀ."""
import logging
from typing import NamedTuple

import numpy as np
from scipy import linalg

from core.exceptions import DimensionMismatchError
from stiefel import services as stiefel

from .points import from_stiefel

logger = logging.getLogger(__name__)


class LipschitzAudit(NamedTuple):
    n: int
    d: int
    pairs: int
    max_ratio: float
    sharp_bound: float
    crude_bound: float

    @property
    def holds(self):
        return self.max_ratio <= self.sharp_bound + 1e-9


def _pair(A, A2):
    A, A2 = stiefel.as_point(A), stiefel.as_point(A2)
    if A.A.shape != A2.A.shape:
        raise DimensionMismatchError(f'frames of different shapes {A.A.shape} and {A2.A.shape}')
    return A, A2


def principal_angles(A, A2):
    """Angles θ₁ ≤ … ≤ θ_d between the ranges of two frames.

    Cosines are the singular values of AᵀA' clamped to [0, 1]; tiny angles
    lose relative accuracy this way.
    """
    A, A2 = _pair(A, A2)
    cosines = np.clip(linalg.svd(A.A.T @ A2.A, compute_uv=False), 0.0, 1.0)
    return np.arccos(cosines)


def projection_product_spectrum(A, A2):
    """The d largest eigenvalues of P_A P_{A'}, descending (cos²θ_j).

    Read off the symmetric matrix P_A P_{A'} P_A, which has the same nonzero spectrum.
    """
    A, A2 = _pair(A, A2)
    P, P2 = from_stiefel(A).P, from_stiefel(A2).P
    product = P @ P2 @ P
    eigvals = linalg.eigvalsh(0.5 * (product + product.T))[::-1]
    return eigvals[:A.d]


def projection_distance_sq(A, A2):
    """‖P_A − P_{A'}‖²_HS, which equals 2Σ(1 − cos²θ_j)."""
    A, A2 = _pair(A, A2)
    return float(np.sum((from_stiefel(A).P - from_stiefel(A2).P) ** 2))


def lipschitz_ratio(A, A2):
    A, A2 = _pair(A, A2)
    step = float(np.linalg.norm(A.A - A2.A))
    if step == 0.0:
        return 0.0
    return float(np.sqrt(projection_distance_sq(A, A2))) / step


def lipschitz_witness(n):
    """A pair of unit vectors on which A ↦ AAᵀ stretches distances (ratio > 1)."""
    first = np.zeros((n, 1))
    first[0, 0] = 1.0
    second = np.full((n, 1), 1.0 / np.sqrt(n))
    return stiefel.StiefelPoint(first), stiefel.StiefelPoint(second)


def lipschitz_audit(n, d, pairs, rng, batch=4096):
    """Largest observed ‖P_A − P_{A'}‖/‖A − A'‖ over independent uniform pairs."""
    best = 0.0
    remaining = pairs
    while remaining > 0:
        size = min(batch, remaining)
        A = stiefel.sample_uniform_batch(n, d, size, rng)
        A2 = stiefel.sample_uniform_batch(n, d, size, rng)
        P = A @ np.swapaxes(A, -1, -2)
        P2 = A2 @ np.swapaxes(A2, -1, -2)
        ratios = np.linalg.norm(P - P2, axis=(1, 2)) / np.linalg.norm(A - A2, axis=(1, 2))
        best = max(best, float(ratios.max()))
        remaining -= size
    audit = LipschitzAudit(n, d, pairs, best, float(np.sqrt(2.0)), float(2.0 * np.sqrt(d)))
    logger.info('Lipschitz audit (n=%d, d=%d, %d pairs): max ratio %.6f', n, d, pairs, best)
    return audit
