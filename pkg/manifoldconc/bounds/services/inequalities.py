"""Functional-inequality constants and the exponential-moment statistic."""
import logging
import math
from typing import NamedTuple

import numpy as np

from core.constants import MANIFOLD_STIEFEL
from core.exceptions import PreconditionError, ValidityError

from .constants import CENTERED_GRADIENT, EXP_MOMENT, LOG_SOBOLEV, by_manifold

logger = logging.getLogger(__name__)

PROVENANCE_LOG_SOBOLEV = 'log-Sobolev inequality, constant 4/(n-2) (Stiefel) or 8/(n-2) (Grassmann)'
PROVENANCE_LP_GROWTH = 'L^p growth |g|_p^2 <= |g|_2^2 + c(p-2)/(n-2)|grad g|_p^2, c = 4 (Stiefel) or 8 (Grassmann)'
PROVENANCE_FIRST_TO_SECOND = 'first-to-second order, 8/(n-2-8d) (Stiefel) or 16/(n-2-16d) (Grassmann)'
PROVENANCE_EXP_MOMENT = 'exponential moment exp((n-2)/(32e)|f|^(2/k)) <= 2 (64e on the Grassmannian)'


def lsi_constant(n, manifold=MANIFOLD_STIEFEL, d=None):
    """4/(n−2) on W_{n,d}, 8/(n−2) on G_{n,d}; also the Poincaré constant.

    W_{n,n} has two connected components, so d = n is rejected.
    """
    if n < 3:
        raise ValidityError(f'needs n >= 3, got n={n}', threshold=3, provenance=PROVENANCE_LOG_SOBOLEV)
    if d is not None and d >= n:
        raise PreconditionError(f'no log-Sobolev inequality for d = n = {n} [{PROVENANCE_LOG_SOBOLEV}]')
    return by_manifold(LOG_SOBOLEV, manifold) / (n - 2)


def poincare_constant(n, manifold=MANIFOLD_STIEFEL, d=None):
    return lsi_constant(n, manifold, d)


def entropy_constant(n, manifold=MANIFOLD_STIEFEL, d=None):
    """Ent(f²) ≤ entropy_constant · E|∇f|²; twice the log-Sobolev constant."""
    return 2.0 * lsi_constant(n, manifold, d)


def lp_growth_rhs(p, n, norm2, gradp_norm, manifold=MANIFOLD_STIEFEL):
    """√(‖g‖₂² + c(p−2)/(n−2)·‖∇g‖_p²)."""
    if p < 2:
        raise PreconditionError(f'p must be at least 2, got {p} [{PROVENANCE_LP_GROWTH}]')
    c = by_manifold(LOG_SOBOLEV, manifold)
    return math.sqrt(norm2 ** 2 + c * (p - 2) / (n - 2) * gradp_norm ** 2)


def first_to_second_constant(n, d, manifold=MANIFOLD_STIEFEL):
    """E|∇f|² ≤ constant · E‖f''‖²_HS for functionals with centered intrinsic gradient."""
    numerator, per_d = by_manifold(CENTERED_GRADIENT, manifold)
    denominator = n - 2 - per_d * d
    if denominator <= 0:
        raise ValidityError(f'needs n - 2 - {per_d}d > 0, got n={n}, d={d}', threshold=per_d * d + 2,
                            provenance=PROVENANCE_FIRST_TO_SECOND)
    return numerator / denominator


class ExpMoment(NamedTuple):
    estimate: float
    std_error: float
    threshold: float = 2.0

    @property
    def holds(self):
        """Within three standard errors of the asserted bound."""
        return self.estimate <= self.threshold + 3.0 * self.std_error


def exp_moment_lhs(samples, n, k=2, manifold=MANIFOLD_STIEFEL):
    """Monte Carlo estimate of E exp((n−2)/(32e)·|f|^{2/k}) (64e on G_{n,d}).

    k = 2 gives the second-order form exp((n−2)/(32e)|f|). The caller certifies
    the normalization of f.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise PreconditionError('no samples')
    if k < 1:
        raise PreconditionError(f'k must be at least 1, got {k}')
    scale = (n - 2) / by_manifold(EXP_MOMENT, manifold).value
    terms = np.exp(scale * np.abs(samples) ** (2.0 / k))
    estimate = float(np.mean(terms))
    std_error = float(np.std(terms, ddof=1) / np.sqrt(samples.size)) if samples.size > 1 else 0.0
    logger.debug('Exponential moment over %d samples: %.6g ± %.2g', samples.size, estimate, std_error)
    return ExpMoment(estimate, std_error)
