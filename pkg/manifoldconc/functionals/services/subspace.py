"""Distances to a fixed subspace, norm functionals A ↦ ‖M vec(A)‖ and the Grassmann distance."""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import linalg

from core.constants import ALL_SUBSPACE_MODES, PROJECTION_TOL, SUBSPACE_COMPLEMENT, SUBSPACE_ONTO
from core.exceptions import DimensionMismatchError, NotOnManifoldError, PreconditionError
from grassmann import services as grassmann
from matcalc.services import as_matrix, kron, vec

from .ambient import ambient_array, vec_rows

logger = logging.getLogger(__name__)


def validate_projection(Q, tol=PROJECTION_TOL):
    """Return Q as a symmetric idempotent matrix, or raise NotOnManifoldError."""
    Q = as_matrix(Q, 'Q')
    if Q.shape[0] != Q.shape[1]:
        raise DimensionMismatchError(f'a projection must be square, got {Q.shape}')
    asymmetry = float(np.linalg.norm(Q - Q.T))
    defect = float(np.linalg.norm(Q @ Q - Q))
    if asymmetry > tol or defect > tol:
        raise NotOnManifoldError(
            f'Q is not an orthogonal projection (|Q - Qᵀ| = {asymmetry:.3e}, |Q² - Q| = {defect:.3e})'
        )
    return 0.5 * (Q + Q.T)


def projection_onto(F):
    """Orthogonal projection onto the column span of F."""
    F = as_matrix(F, 'F')
    basis = linalg.orth(F)
    if basis.shape[1] == 0:
        raise PreconditionError('the spanning matrix is zero')
    return basis @ basis.T


def projection_rank(Q):
    return int(round(float(np.trace(Q))))


def _selected(Q, mode):
    if mode not in ALL_SUBSPACE_MODES:
        raise PreconditionError(f'unknown subspace mode {mode!r}; expected one of {ALL_SUBSPACE_MODES}')
    Q = validate_projection(Q)
    if mode == SUBSPACE_COMPLEMENT:
        return np.eye(Q.shape[0]) - Q
    return Q


def subspace_operator(Q, d, mode=SUBSPACE_ONTO):
    """M = I_d ⊗ Q' with Q' = Q (onto) or I − Q (complement)."""
    return kron(np.eye(d), _selected(Q, mode))


def dist_to_subspace(A, Q, mode=SUBSPACE_ONTO):
    """‖Q'A‖_HS, which equals ‖(I_d ⊗ Q') vec(A)‖."""
    X = ambient_array(A)
    selected = _selected(Q, mode)
    if selected.shape[0] != X.shape[0]:
        size = selected.shape[0]
        raise DimensionMismatchError(f'projection is {size}x{size}, point has {X.shape[0]} rows')
    return float(np.linalg.norm(selected @ X))


class NormEvaluation(NamedTuple):
    value: float
    centering: float


@dataclass(frozen=True)
class NormFunctional:
    """A ↦ ‖M vec(A)‖ with the centering ‖M‖_HS/√n."""

    M: np.ndarray
    n: int
    d: int

    def __post_init__(self):
        M = as_matrix(self.M, 'M')
        if M.shape[1] != self.n * self.d:
            raise DimensionMismatchError(f'M needs {self.n * self.d} columns, got {M.shape}')
        M.setflags(write=False)
        object.__setattr__(self, 'M', M)

    @classmethod
    def for_subspace(cls, Q, d, mode=SUBSPACE_ONTO):
        Q = validate_projection(Q)
        return cls(subspace_operator(Q, d, mode), Q.shape[0], d)

    @property
    def centering(self):
        return float(np.linalg.norm(self.M)) / np.sqrt(self.n)

    @property
    def op_norm(self):
        return float(np.linalg.norm(self.M, 2))

    def __call__(self, A):
        X = ambient_array(A)
        if X.shape != (self.n, self.d):
            raise DimensionMismatchError(f'norm functional acts on {(self.n, self.d)} matrices, got {X.shape}')
        return float(np.linalg.norm(self.M @ vec(X)))

    def values(self, batch):
        return np.linalg.norm(vec_rows(batch) @ self.M.T, axis=1)


def norm_functional(M, A):
    """‖M vec(A)‖ together with its centering constant."""
    X = ambient_array(A)
    functional = NormFunctional(M, *X.shape)
    return NormEvaluation(functional(X), functional.centering)


def subspace_centering(n, d, rank, mode=SUBSPACE_ONTO):
    """‖I_d ⊗ Q'‖_HS/√n: √(md/n) onto a rank-m subspace, √((n−m)d/n) for the complement."""
    if mode not in ALL_SUBSPACE_MODES:
        raise PreconditionError(f'unknown subspace mode {mode!r}')
    dim = rank if mode == SUBSPACE_ONTO else n - rank
    return float(np.sqrt(dim * d / n))


def _grassmann_pair(P, P_F):
    P, P_F = grassmann.as_point(P), grassmann.as_point(P_F)
    if P.P.shape != P_F.P.shape or P.d != P_F.d:
        raise DimensionMismatchError(f'points of G_{{{P.n},{P.d}}} and G_{{{P_F.n},{P_F.d}}}')
    return P, P_F


def grassmann_dist_sq(P, P_F):
    """‖P − P_F‖²_HS computed as 2(d − ⟨P, P_F⟩)."""
    P, P_F = _grassmann_pair(P, P_F)
    return 2.0 * (P.d - float(np.sum(P.P * P_F.P)))


def grassmann_dist_values(P_F, batch):
    P_F = grassmann.as_point(P_F)
    return 2.0 * (P_F.d - np.einsum('nij,ij->n', np.asarray(batch, dtype=float), P_F.P))


def grassmann_dist_mean(n, d):
    """2d(1 − d/n), the exact mean under the uniform measure."""
    return 2.0 * d * (1.0 - d / n)
