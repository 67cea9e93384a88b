"""
Quadratic forms f₂(A) = vec(A)ᵀ M vec(A) and the objects their bounds are stated in.

U = mat(M vec(A)) and B = M − (A∘U) ⊗ I_n; the ambient gradient is 2U, the
intrinsic gradient 2π_A U and the intrinsic Hessian 2·Π B Π.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from core.constants import QUADRATIC_SYMMETRY_TOL
from core.exceptions import DimensionMismatchError, PreconditionError
from matcalc.services import as_matrix, kron, mat, sym_product, vec
from stiefel import services as stiefel

from .ambient import ambient_array, mat_rows, vec_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric nd×nd coefficient matrix acting on vec of n×d matrices."""

    M: np.ndarray
    n: int
    d: int

    def __post_init__(self):
        M = as_matrix(self.M, 'M')
        size = self.n * self.d
        if M.shape != (size, size):
            raise DimensionMismatchError(f'a form on {self.n}x{self.d} matrices needs a {size}x{size} M, got {M.shape}')
        asymmetry = float(np.linalg.norm(M - M.T))
        if asymmetry > QUADRATIC_SYMMETRY_TOL * max(1.0, float(np.linalg.norm(M))):
            logger.info('Symmetrizing quadratic form coefficients (|M - Mᵀ| = %.3e)', asymmetry)
        M = 0.5 * (M + M.T)
        M.setflags(write=False)
        object.__setattr__(self, 'M', M)

    @classmethod
    def identity(cls, n, d):
        """M = I_nd, for which f₂ ≡ d on the Stiefel manifold."""
        return cls(np.eye(n * d), n, d)

    @classmethod
    def ones(cls, n, d):
        return cls(np.ones((n * d, n * d)), n, d)

    @classmethod
    def random(cls, n, d, rng):
        """Symmetrized Gaussian coefficients scaled to unit-order operator norm."""
        G = rng.standard_normal((n * d, n * d))
        return cls((G + G.T) / np.sqrt(8.0 * n * d), n, d)

    @property
    def shape(self):
        return (self.n, self.d)

    @property
    def trace_centering(self):
        """tr(M)/n, the mean of f₂ under the uniform measure on W_{n,d}."""
        return float(np.trace(self.M)) / self.n

    @property
    def hs_norm(self):
        return float(np.linalg.norm(self.M))

    @property
    def op_norm(self):
        return float(np.linalg.norm(self.M, 2))


class QuadraticEvaluation(NamedTuple):
    value: float
    U: np.ndarray
    B: np.ndarray

    @property
    def ambient_gradient(self):
        return 2.0 * self.U


class ProjectedTerms(NamedTuple):
    """π_A U and Π B Π, whose norms enter the Hanson–Wright variants."""

    PU: np.ndarray
    PBP: np.ndarray


def _point(Q, A):
    X = ambient_array(A)
    if X.shape != Q.shape:
        raise DimensionMismatchError(f'form acts on {Q.shape} matrices, got {X.shape}')
    return X


def quad_value_grad_hess(Q, A):
    """(f₂(A), U, B) at a point."""
    X = _point(Q, A)
    x = vec(X)
    Mx = Q.M @ x
    U = mat(Mx, Q.n, Q.d)
    B = Q.M - kron(sym_product(X, U), np.eye(Q.n))
    return QuadraticEvaluation(float(x @ Mx), U, B)


def projected_terms(Q, A):
    """π_A U and Π B Π at a Stiefel point."""
    A = stiefel.as_point(_point(Q, A))
    evaluation = quad_value_grad_hess(Q, A)
    projector = stiefel.tangent_projector_matrix(A)
    PBP = projector @ evaluation.B @ projector
    return ProjectedTerms(stiefel.project_tangent_array(A.A, evaluation.U), 0.5 * (PBP + PBP.T))


def quadratic_values(Q, batch):
    rows = vec_rows(batch)
    return np.einsum('ni,ij,nj->n', rows, Q.M, rows)


def det_form_d2(C):
    """The form with vec(A)ᵀ M vec(A) = det(AᵀC) for n×2 matrices A.

    M_{ij,kl} = (c_ij c_kl − c_il c_kj)/2 with (i,j) ↦ i + jn.
    """
    C = as_matrix(C, 'C')
    n, d = C.shape
    if d != 2:
        raise PreconditionError(f'the determinant encoding needs d = 2, got d = {d}')
    c = vec(C)
    swapped = np.einsum('il,kj->ijkl', C, C).reshape((n * d, n * d), order='F')
    return QuadraticForm(0.5 * (np.outer(c, c) - swapped), n, d)


def as_functional(Q, name='quadratic'):
    def value(X):
        x = vec(X)
        return float(x @ Q.M @ x)

    def gradient(X):
        return 2.0 * mat(Q.M @ vec(X), Q.n, Q.d)

    return stiefel.SmoothFunctional(
        value=value,
        gradient=gradient,
        hessian=lambda X: 2.0 * Q.M,
        name=name,
        hessian_vector=lambda X, H: 2.0 * mat(Q.M @ vec(H), Q.n, Q.d),
        value_batch=lambda batch: quadratic_values(Q, batch),
        gradient_batch=lambda batch: mat_rows(2.0 * vec_rows(batch) @ Q.M, Q.shape),
    )
