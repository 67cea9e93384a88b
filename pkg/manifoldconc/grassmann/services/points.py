"""Grassmann points as rank-d orthogonal projections, with sampling and retraction."""
import logging
from dataclasses import dataclass

import numpy as np

from core.constants import (
    EIGENVALUE_FLOOR,
    GRASSMANN_IDEMPOTENCE_TOL,
    GRASSMANN_SYMMETRY_TOL,
    GRASSMANN_TANGENT_TOL,
    GRASSMANN_TRACE_TOL,
    SAMPLER_MAX_RETRIES,
    SYMMETRY_TOL,
)
from core.exceptions import DimensionMismatchError, NotOnManifoldError, PreconditionError, SamplingError
from matcalc.services import as_matrix
from stiefel import services as stiefel

logger = logging.getLogger(__name__)


def _sym(M):
    return 0.5 * (M + np.swapaxes(M, -1, -2))


@dataclass(frozen=True)
class GrassmannPoint:
    """Symmetric idempotent n×n matrix; the rank is read off the trace."""

    P: np.ndarray

    def __post_init__(self):
        P = as_matrix(self.P, 'P')
        if P.shape[0] != P.shape[1]:
            raise DimensionMismatchError(f'a projection must be square, got {P.shape}')
        asymmetry = float(np.linalg.norm(P - P.T))
        if asymmetry > GRASSMANN_SYMMETRY_TOL:
            raise NotOnManifoldError(f'P is not symmetric: |P - Pᵀ| = {asymmetry:.3e}')
        defect = float(np.linalg.norm(P @ P - P))
        if defect > GRASSMANN_IDEMPOTENCE_TOL:
            raise NotOnManifoldError(f'P is not idempotent: |P² - P| = {defect:.3e}')
        trace = float(np.trace(P))
        if abs(trace - round(trace)) > GRASSMANN_TRACE_TOL:
            raise NotOnManifoldError(f'trace(P) = {trace!r} is not an integer rank')
        P.setflags(write=False)
        object.__setattr__(self, 'P', P)

    @property
    def n(self):
        return self.P.shape[0]

    @property
    def d(self):
        return int(round(float(np.trace(self.P))))


def as_point(P):
    return P if isinstance(P, GrassmannPoint) else GrassmannPoint(P)


@dataclass(frozen=True)
class GrassmannTangent:
    """Symmetric S with S = SP + PS."""

    base: GrassmannPoint
    S: np.ndarray

    def __post_init__(self):
        S = as_matrix(self.S, 'S')
        if S.shape != self.base.P.shape:
            raise DimensionMismatchError(f'tangent shape {S.shape} does not match base {self.base.P.shape}')
        scale = max(1.0, float(np.linalg.norm(S)))
        if np.linalg.norm(S - S.T) > SYMMETRY_TOL * scale:
            raise NotOnManifoldError('Grassmann tangent vectors are symmetric')
        P = self.base.P
        defect = float(np.linalg.norm(S - (S @ P + P @ S)))
        if defect > GRASSMANN_TANGENT_TOL * scale:
            raise NotOnManifoldError(f'S is not tangent at P: |S - (SP + PS)| = {defect:.3e}')
        S.setflags(write=False)
        object.__setattr__(self, 'S', S)

    @property
    def norm(self):
        return float(np.linalg.norm(self.S))


def from_stiefel(A):
    """P_A = AAᵀ."""
    A = stiefel.as_point(A)
    return GrassmannPoint(_sym(A.A @ A.A.T))


def sample_uniform_batch(n, d, size, rng):
    """``size`` uniform projections G(GᵀG)^{-1}Gᵀ, shape (size, n, n)."""
    if not 1 <= d <= n:
        raise DimensionMismatchError(f'sampling needs 1 <= d <= n, got n={n}, d={d}')
    G = rng.standard_normal((size, n, d))
    gram = np.swapaxes(G, -1, -2) @ G
    ok = np.linalg.eigvalsh(gram).min(axis=-1) > EIGENVALUE_FLOOR
    retries = 0
    while not np.all(ok):
        retries += 1
        if retries > SAMPLER_MAX_RETRIES:
            raise SamplingError(f'Gram matrix stayed singular after {SAMPLER_MAX_RETRIES} resamples')
        bad = np.flatnonzero(~ok)
        logger.warning('Resampling %d singular Gram matrices (retry %d)', bad.size, retries)
        G[bad] = rng.standard_normal((bad.size, n, d))
        gram[bad] = np.swapaxes(G[bad], -1, -2) @ G[bad]
        ok[bad] = np.linalg.eigvalsh(gram[bad]).min(axis=-1) > EIGENVALUE_FLOOR
    return _sym(G @ np.linalg.solve(gram, np.swapaxes(G, -1, -2)))


def sample_uniform(n, d, rng):
    return GrassmannPoint(sample_uniform_batch(n, d, 1, rng)[0])


def sym_project(M):
    """π_sym(M) = (M + Mᵀ)/2."""
    M = as_matrix(M, 'M')
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatchError(f'sym_project needs a square matrix, got {M.shape}')
    return _sym(M)


def project_tangent_array(P, M):
    """PM + MP − 2PMP, stacked along leading axes allowed."""
    PM = P @ M
    return PM + M @ P - 2.0 * PM @ P


def tangent_project(P, M):
    """π_P M = [P,[P,M]] for symmetric M."""
    P = as_point(P)
    M = as_matrix(M, 'M')
    if M.shape != P.P.shape:
        raise DimensionMismatchError(f'cannot project a {M.shape} matrix at a {P.P.shape} point')
    if np.linalg.norm(M - M.T) > SYMMETRY_TOL * max(1.0, float(np.linalg.norm(M))):
        raise PreconditionError('tangent_project expects a symmetric matrix; apply sym_project first')
    return GrassmannTangent(P, _sym(project_tangent_array(P.P, M)))


def random_tangent(P, rng, unit=True):
    P = as_point(P)
    G = rng.standard_normal(P.P.shape)
    S = _sym(project_tangent_array(P.P, _sym(G)))
    if unit:
        S = S / np.linalg.norm(S)
    return GrassmannTangent(P, S)


def lift(P):
    """A Stiefel frame whose range is the range of P (top-d eigenvectors)."""
    P = as_point(P)
    eigvals, eigvecs = np.linalg.eigh(P.P)
    return stiefel.StiefelPoint(eigvecs[:, P.n - P.d:])


def retract(P, S, t):
    """Move the lifted frame along SA with the polar retraction and project back."""
    P = as_point(P)
    S = S.S if isinstance(S, GrassmannTangent) else as_matrix(S, 'S')
    if t == 0:
        return P
    A = lift(P)
    return from_stiefel(stiefel.retract(A, S @ A.A, t))
