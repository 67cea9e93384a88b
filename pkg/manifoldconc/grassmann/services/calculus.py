"""
Intrinsic calculus on G_{n,d} in the projection-matrix embedding.

Functionals live on all n×n matrices; their derivatives are conjugated by
π_sym before the tangent projection π_P M = PM + MP − 2PMP is applied.
"""
import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from core.constants import DENSE_HESSIAN_MAX_DIM, FD_STEP, GRADIENT_ZERO_THRESHOLD
from core.exceptions import DimensionMismatchError
from matcalc.services import as_matrix, commutator, mat, vec
from stiefel.services import BRANCH_GRADIENT, BRANCH_OPERATOR, SecondOrderModulus, fd_gradient

from .points import GrassmannTangent, _sym, as_point, project_tangent_array, random_tangent, retract

logger = logging.getLogger(__name__)


def _direction(P, V):
    V = V.S if isinstance(V, GrassmannTangent) else as_matrix(V, 'V')
    if V.shape != P.P.shape:
        raise DimensionMismatchError(f'direction shape {V.shape} does not match point {P.P.shape}')
    return _sym(V)


def _sym_gradient(f, P):
    return _sym(f.gradient(P.P))


def intrinsic_gradient(f, P):
    """∇_G f(P) = π_P π_sym ∇f(P)."""
    P = as_point(P)
    return GrassmannTangent(P, _sym(project_tangent_array(P.P, _sym_gradient(f, P))))


def _hessian_map(f, P):
    G = _sym_gradient(f, P)
    hvp = f.hvp_at(P.P)

    def apply(V):
        W = _sym(project_tangent_array(P.P, _sym(V)))
        out = project_tangent_array(P.P, _sym(hvp(W))) - commutator(P.P, commutator(G, W))
        return _sym(out)

    return apply


def intrinsic_hessian_apply(f, P, V):
    """f''_G(P)V = π_P π_sym f''(P) π_P V − [P,[∇f(P), π_P V]]."""
    P = as_point(P)
    return GrassmannTangent(P, _hessian_map(f, P)(_direction(P, V)))


def intrinsic_hessian_matrix(f, P):
    """The n²×n² matrix of V ↦ f''_G(P) π_sym V on vec coordinates."""
    P = as_point(P)
    n = P.n
    apply = _hessian_map(f, P)
    columns = []
    for k in range(n * n):
        basis = np.zeros(n * n)
        basis[k] = 1.0
        columns.append(vec(apply(mat(basis, n, n))))
    H = np.column_stack(columns)
    return 0.5 * (H + H.T)


def intrinsic_hessian_operator(f, P):
    P = as_point(P)
    n = P.n
    apply = _hessian_map(f, P)

    def matvec(v):
        return vec(apply(mat(np.ravel(v), n, n)))

    return LinearOperator((n * n, n * n), matvec=matvec, rmatvec=matvec, dtype=float)


def intrinsic_hessian_opnorm(f, P):
    P = as_point(P)
    if P.n * P.n <= DENSE_HESSIAN_MAX_DIM:
        return float(np.linalg.norm(intrinsic_hessian_matrix(f, P), 2))
    eigval = eigsh(intrinsic_hessian_operator(f, P), k=1, which='LM', return_eigenvectors=False)
    return float(abs(eigval[0]))


def hessian_vector_via_identity(f, P, V, step=None):
    """f''_G(P)V = ∇_G ψ_V(P) − [P,[∇_G f(P), V]] with ψ_V(X) = ⟨π_X π_sym ∇f(X), V⟩.

    ∇_G ψ_V is a central-difference gradient over all n² entries, then
    symmetrized and tangent-projected.
    """
    P = as_point(P)
    V = _direction(P, V)
    if step is None:
        step = FD_STEP * max(1.0, float(np.linalg.norm(P.P)))

    def psi(X):
        return float(np.sum(project_tangent_array(X, _sym(f.gradient(X))) * V))

    field = _sym(project_tangent_array(P.P, _sym(fd_gradient(psi, P.P, step))))
    grad_g = _sym(project_tangent_array(P.P, _sym_gradient(f, P)))
    return GrassmannTangent(P, _sym(field - commutator(P.P, commutator(grad_g, V))))


def second_order_modulus(f, P):
    """|∇^{(2)}_G f(P)|, falling back to ‖f''_G(P)‖_op at critical points."""
    P = as_point(P)
    grad = _sym(project_tangent_array(P.P, _sym_gradient(f, P)))
    grad_norm = float(np.linalg.norm(grad))
    scale = max(1.0, float(np.linalg.norm(f.hessian(P.P))))
    if grad_norm > GRADIENT_ZERO_THRESHOLD * scale:
        value = float(np.linalg.norm(_hessian_map(f, P)(grad))) / grad_norm
        return SecondOrderModulus(value, BRANCH_GRADIENT)
    return SecondOrderModulus(intrinsic_hessian_opnorm(f, P), BRANCH_OPERATOR)


def second_order_modulus_fd(f, P, rng, directions=8, t=1e-6):
    """Difference-quotient estimate of the local Lipschitz constant of P ↦ ‖∇_G f(P)‖."""
    P = as_point(P)

    def grad_norm(point):
        return float(np.linalg.norm(project_tangent_array(point.P, _sym(f.gradient(point.P)))))

    grad = _sym(project_tangent_array(P.P, _sym_gradient(f, P)))
    candidates = [random_tangent(P, rng) for _ in range(directions)]
    steepest = _hessian_map(f, P)(grad)
    if np.linalg.norm(steepest) > 0:
        candidates.insert(0, GrassmannTangent(P, steepest / np.linalg.norm(steepest)))

    best = 0.0
    for S in candidates:
        forward, backward = retract(P, S, t), retract(P, S, -t)
        distance = float(np.linalg.norm(forward.P - backward.P))
        best = max(best, abs(grad_norm(forward) - grad_norm(backward)) / distance)
    return best
