"""Symmetric product and matrix commutator."""
from core.exceptions import DimensionMismatchError

from .arrays import as_matrix


def sym_product(M, N):
    """M∘N = ½(MᵀN + NᵀM), a symmetric d×d matrix."""
    M = as_matrix(M, 'M')
    N = as_matrix(N, 'N')
    if M.shape != N.shape:
        raise DimensionMismatchError(f'sym_product needs equal shapes, got {M.shape} and {N.shape}')
    product = M.T @ N
    return 0.5 * (product + product.T)


def commutator(M, N):
    """[M, N] = MN − NM."""
    M = as_matrix(M, 'M')
    N = as_matrix(N, 'N')
    if M.shape != N.shape or M.shape[0] != M.shape[1]:
        raise DimensionMismatchError(f'commutator needs equal square shapes, got {M.shape} and {N.shape}')
    return M @ N - N @ M
