"""
Intrinsic first- and second-order calculus on W_{n,d}.

All Hessians act on vec(V) with column-stacking. The correction matrix is
B = f''(A) − (A∘∇f(A)) ⊗ I_n, so that B·vec(V) = vec(f''(A)[V] − V(A∘∇f(A))),
and the intrinsic Hessian is the conjugation Π B Π by the tangent projection.
"""
import logging
from typing import NamedTuple

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from core.constants import DENSE_HESSIAN_MAX_DIM, FD_STEP, GRADIENT_ZERO_THRESHOLD
from core.exceptions import DimensionMismatchError
from matcalc.services import as_matrix, commutation_matrix, kron, mat, sym_product, vec

from .points import TangentVector, as_point, project_tangent_array, random_tangent, retract
from .smooth import fd_gradient

logger = logging.getLogger(__name__)

BRANCH_GRADIENT = 'gradient'
BRANCH_OPERATOR = 'operator-norm'


class SecondOrderModulus(NamedTuple):
    value: float
    branch: str


def _direction(A, V):
    V = V.V if isinstance(V, TangentVector) else as_matrix(V, 'V')
    if V.shape != A.A.shape:
        raise DimensionMismatchError(f'direction shape {V.shape} does not match point {A.A.shape}')
    return V


def tangent_projector_matrix(A):
    """Π = I − ½(I_d ⊗ AAᵀ) − ½(Aᵀ ⊗ A)K_{n,d}, the matrix of π_A on vec coordinates."""
    A = as_point(A)
    n, d = A.n, A.d
    return np.eye(n * d) - 0.5 * kron(np.eye(d), A.A @ A.A.T) - 0.5 * (kron(A.A.T, A.A) @ commutation_matrix(n, d))


def intrinsic_gradient(f, A):
    """∇_W f(A) = π_A ∇f(A)."""
    A = as_point(A)
    return TangentVector(A, project_tangent_array(A.A, f.gradient(A.A)))


def correction_matrix(f, A):
    """B = f''(A) − (A∘∇f(A)) ⊗ I_n."""
    A = as_point(A)
    S = sym_product(A.A, f.gradient(A.A))
    return f.hessian(A.A) - kron(S, np.eye(A.n))


def intrinsic_hessian_apply(f, A, V):
    """f''_W(A)V = π_A mat(B vec(π_A V))."""
    A = as_point(A)
    V = _direction(A, V)
    S = sym_product(A.A, f.gradient(A.A))
    W = project_tangent_array(A.A, V)
    return project_tangent_array(A.A, f.hvp(A.A, W) - W @ S)


def intrinsic_hessian_matrix(f, A):
    """Π B Π as an nd×nd symmetric matrix."""
    A = as_point(A)
    proj = tangent_projector_matrix(A)
    H = proj @ correction_matrix(f, A) @ proj
    return 0.5 * (H + H.T)


def intrinsic_hessian_operator(f, A):
    """Matrix-free f''_W(A) on vec coordinates."""
    A = as_point(A)
    n, d = A.n, A.d
    S = sym_product(A.A, f.gradient(A.A))
    hvp = f.hvp_at(A.A)

    def matvec(v):
        W = project_tangent_array(A.A, mat(np.ravel(v), n, d))
        return vec(project_tangent_array(A.A, hvp(W) - W @ S))

    return LinearOperator((n * d, n * d), matvec=matvec, rmatvec=matvec, dtype=float)


def intrinsic_hessian_opnorm(f, A):
    """‖f''_W(A)‖_op; dense SVD for small nd, Lanczos otherwise."""
    A = as_point(A)
    if A.n * A.d <= DENSE_HESSIAN_MAX_DIM:
        return float(np.linalg.norm(intrinsic_hessian_matrix(f, A), 2))
    eigval = eigsh(intrinsic_hessian_operator(f, A), k=1, which='LM', return_eigenvectors=False)
    return float(abs(eigval[0]))


def hessian_vector_via_identity(f, A, V, step=None):
    """f''_W(A)V = ∇_W⟨∇_W f(A), V⟩ + π_A(∇_W f(A)(A∘V)).

    The first term differentiates ψ_V(X) = ⟨∇f(X) − X(X∘∇f(X)), V⟩ by
    central differences over all nd ambient coordinates.
    """
    A = as_point(A)
    V = _direction(A, V)
    if step is None:
        step = FD_STEP * max(1.0, float(np.linalg.norm(A.A)))

    def psi(X):
        return float(np.sum(project_tangent_array(X, f.gradient(X)) * V))

    field = project_tangent_array(A.A, fd_gradient(psi, A.A, step))
    grad_w = project_tangent_array(A.A, f.gradient(A.A))
    return field + project_tangent_array(A.A, grad_w @ sym_product(A.A, V))


def second_order_modulus(f, A):
    """|∇^{(2)} f(A)| = ‖f''_W(A)∇_W f(A)‖ / ‖∇_W f(A)‖, or ‖f''_W(A)‖_op at critical points."""
    A = as_point(A)
    grad = project_tangent_array(A.A, f.gradient(A.A))
    grad_norm = float(np.linalg.norm(grad))
    scale = max(1.0, float(np.linalg.norm(f.hessian(A.A))))
    if grad_norm > GRADIENT_ZERO_THRESHOLD * scale:
        value = float(np.linalg.norm(intrinsic_hessian_apply(f, A, grad))) / grad_norm
        return SecondOrderModulus(value, BRANCH_GRADIENT)
    return SecondOrderModulus(intrinsic_hessian_opnorm(f, A), BRANCH_OPERATOR)


def second_order_modulus_fd(f, A, rng, directions=8, t=1e-6):
    """Difference-quotient estimate of the local Lipschitz constant of A ↦ ‖∇_W f(A)‖.

    Probes the steepest tangent direction f''_W(A)∇_W f(A) and ``directions``
    random tangent directions with symmetric retraction steps.
    """
    A = as_point(A)

    def grad_norm(point):
        return float(np.linalg.norm(project_tangent_array(point.A, f.gradient(point.A))))

    grad = project_tangent_array(A.A, f.gradient(A.A))
    candidates = [random_tangent(A, rng) for _ in range(directions)]
    steepest = intrinsic_hessian_apply(f, A, grad)
    if np.linalg.norm(steepest) > 0:
        candidates.insert(0, TangentVector(A, steepest / np.linalg.norm(steepest)))

    best = 0.0
    for V in candidates:
        forward, backward = retract(A, V, t), retract(A, V, -t)
        distance = float(np.linalg.norm(forward.A - backward.A))
        best = max(best, abs(grad_norm(forward) - grad_norm(backward)) / distance)
    return best
