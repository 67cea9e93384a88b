"""
Column-stacking vectorization and the commutation matrix.

Index convention: entry (i, j) of an n×m matrix sits at position i + j·n of
vec(A); mat is the inverse reshaping.
"""
import numpy as np

from core.constants import VEC_ORDER
from core.exceptions import DimensionMismatchError

from .arrays import as_matrix


def vec(A):
    """Stack the columns of ``A`` into one vector."""
    return as_matrix(A, 'A').reshape(-1, order=VEC_ORDER)


def mat(v, n, m):
    """Inverse of :func:`vec` for an n×m target shape."""
    v = np.asarray(v, dtype=float).ravel()
    if n < 1 or m < 1 or v.size != n * m:
        raise DimensionMismatchError(f'cannot reshape a vector of length {v.size} into {n}x{m}')
    return v.reshape((n, m), order=VEC_ORDER)


class CommutationMatrix:
    """K_{n,m} stored as the index map of its permutation.

    ``K @ vec(A) == vec(A.T)`` for every n×m matrix A.
    """

    # numpy defers `X @ K` to __rmatmul__
    __array_ufunc__ = None

    def __init__(self, n, m):
        if n < 1 or m < 1:
            raise DimensionMismatchError(f'commutation matrix needs n, m >= 1, got ({n}, {m})')
        self.n = n
        self.m = m
        positions = np.arange(n * m).reshape((n, m), order=VEC_ORDER)
        # vec(A.T)[k] = vec(A)[perm[k]]
        self.perm = positions.T.reshape(-1, order=VEC_ORDER)

    @property
    def shape(self):
        return (self.n * self.m, self.n * self.m)

    @property
    def T(self):
        return CommutationMatrix(self.m, self.n)

    def apply(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.n * self.m:
            raise DimensionMismatchError(f'K_{{{self.n},{self.m}}} cannot act on length {v.shape[0]}')
        return v[self.perm]

    def __matmul__(self, other):
        return self.apply(other)

    def __rmatmul__(self, other):
        # X @ K permutes the columns of X by the inverse map
        other = np.asarray(other, dtype=float)
        out = np.empty_like(other)
        out[..., self.perm] = other
        return out

    def dense(self):
        size = self.n * self.m
        K = np.zeros((size, size))
        K[np.arange(size), self.perm] = 1.0
        return K

    def __repr__(self):
        return f'CommutationMatrix(n={self.n}, m={self.m})'


def commutation_matrix(n, m):
    return CommutationMatrix(n, m)


def kron(A, B):
    """Kronecker product of two matrices."""
    return np.kron(as_matrix(A, 'A'), as_matrix(B, 'B'))
