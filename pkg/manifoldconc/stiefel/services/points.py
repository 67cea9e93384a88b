"""Points, tangent vectors, sampling and retraction on the Stiefel manifold W_{n,d}."""
import logging
from dataclasses import dataclass

import numpy as np

from core.constants import EIGENVALUE_FLOOR, ORTHONORMAL_TOL, REORTHONORMALIZE_TOL, SAMPLER_MAX_RETRIES, TANGENT_TOL
from core.exceptions import DimensionMismatchError, NotOnManifoldError, RetractionError, SamplingError
from matcalc.services import as_matrix, sym_product

logger = logging.getLogger(__name__)


def inverse_sqrt(S, floor=EIGENVALUE_FLOOR):
    """S^{-1/2} for symmetric positive definite S (stacked along a leading axis allowed).

    Returns ``(root, ok)`` where ``ok`` flags matrices whose smallest
    eigenvalue cleared ``floor``.
    """
    eigvals, eigvecs = np.linalg.eigh(S)
    ok = eigvals.min(axis=-1) > floor
    safe = np.where(eigvals > floor, eigvals, 1.0)
    root = (eigvecs * (1.0 / np.sqrt(safe))[..., None, :]) @ np.swapaxes(eigvecs, -1, -2)
    return root, ok


def orthonormality_error(A):
    d = A.shape[1]
    return float(np.linalg.norm(A.T @ A - np.eye(d)))


@dataclass(frozen=True)
class StiefelPoint:
    """n×d matrix with orthonormal columns."""

    A: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, 'A')
        n, d = A.shape
        if d > n:
            raise DimensionMismatchError(f'a Stiefel point needs d <= n, got {n}x{d}')
        error = orthonormality_error(A)
        if error > ORTHONORMAL_TOL:
            if error > REORTHONORMALIZE_TOL:
                raise NotOnManifoldError(f'columns are not orthonormal: |AᵀA - I| = {error:.3e}')
            root, ok = inverse_sqrt(A.T @ A)
            if not ok:
                raise NotOnManifoldError('cannot re-orthonormalize a rank deficient frame')
            A = A @ root
        A.setflags(write=False)
        object.__setattr__(self, 'A', A)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def d(self):
        return self.A.shape[1]


def as_point(A):
    return A if isinstance(A, StiefelPoint) else StiefelPoint(A)


@dataclass(frozen=True)
class TangentVector:
    """V in T_A, i.e. A∘V = 0."""

    base: StiefelPoint
    V: np.ndarray

    def __post_init__(self):
        V = as_matrix(self.V, 'V')
        if V.shape != self.base.A.shape:
            raise DimensionMismatchError(f'tangent vector shape {V.shape} does not match base {self.base.A.shape}')
        defect = float(np.linalg.norm(sym_product(self.base.A, V)))
        if defect > TANGENT_TOL * max(1.0, float(np.linalg.norm(V))):
            raise NotOnManifoldError(f'V is not tangent at A: |A∘V| = {defect:.3e}')
        V.setflags(write=False)
        object.__setattr__(self, 'V', V)

    @property
    def norm(self):
        return float(np.linalg.norm(self.V))


def sample_uniform_batch(n, d, size, rng):
    """``size`` Haar-distributed frames G(GᵀG)^{-1/2}, shape (size, n, d)."""
    if not 1 <= d <= n:
        raise DimensionMismatchError(f'sampling needs 1 <= d <= n, got n={n}, d={d}')
    G = rng.standard_normal((size, n, d))
    root, ok = inverse_sqrt(np.swapaxes(G, -1, -2) @ G)
    retries = 0
    while not np.all(ok):
        retries += 1
        if retries > SAMPLER_MAX_RETRIES:
            raise SamplingError(f'Gram matrix stayed singular after {SAMPLER_MAX_RETRIES} resamples')
        bad = np.flatnonzero(~ok)
        logger.warning('Resampling %d singular Gram matrices (retry %d)', bad.size, retries)
        G[bad] = rng.standard_normal((bad.size, n, d))
        root[bad], ok[bad] = inverse_sqrt(np.swapaxes(G[bad], -1, -2) @ G[bad])
    return G @ root


def sample_uniform(n, d, rng):
    """One draw from the uniform (Haar) measure on W_{n,d}."""
    return StiefelPoint(sample_uniform_batch(n, d, 1, rng)[0])


def project_tangent_array(X, M):
    """M − X(X∘M) for any conformable X and M, stacked along leading axes allowed."""
    XtM = np.swapaxes(X, -1, -2) @ M
    return M - X @ (0.5 * (XtM + np.swapaxes(XtM, -1, -2)))


def tangent_project(A, M):
    """π_A M, the orthogonal projection onto T_A."""
    A = as_point(A)
    M = as_matrix(M, 'M')
    if M.shape != A.A.shape:
        raise DimensionMismatchError(f'cannot project a {M.shape} matrix at a {A.A.shape} point')
    return TangentVector(A, project_tangent_array(A.A, M))


def random_tangent(A, rng, unit=True):
    """Tangent direction π_A G for Gaussian G, normalized unless ``unit`` is False."""
    A = as_point(A)
    V = project_tangent_array(A.A, rng.standard_normal(A.A.shape))
    if unit:
        V = V / np.linalg.norm(V)
    return TangentVector(A, V)


def retract(A, V, t):
    """Polar retraction (A + tV)((A + tV)ᵀ(A + tV))^{-1/2}."""
    A = as_point(A)
    V = V.V if isinstance(V, TangentVector) else as_matrix(V, 'V')
    if t == 0:
        return A
    Y = A.A + t * V
    root, ok = inverse_sqrt(Y.T @ Y)
    if not ok:
        raise RetractionError(f'A + tV is numerically rank deficient at t={t}')
    return StiefelPoint(Y @ root)
