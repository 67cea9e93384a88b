"""
Polynomial chaos functionals.

A chaos of order k is f_k(A) = c(x, …, x) with x = vec(A) and c a symmetric
order-k tensor over the nd column-stacked coordinates of an n×d matrix.
Symmetry makes the ℓ-th derivative k!/(k−ℓ)!·c(x, …, x, ·, …, ·).
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from core.constants import SYMMETRY_TOL
from core.exceptions import DimensionMismatchError, PreconditionError
from matcalc.services import DenseTensor, mat, symmetrize_tensor, vec
from stiefel.services import SmoothFunctional

from .ambient import ambient_array, mat_rows, vec_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChaosCoefficients:
    """Symmetric coefficient tensor together with the matrix shape it indexes."""

    tensor: DenseTensor
    shape: tuple

    def __post_init__(self):
        size = int(np.prod(self.shape))
        if any(dim != size for dim in self.tensor.dims):
            raise DimensionMismatchError(
                f'coefficients of shape {self.tensor.dims} do not index vec of a {self.shape} matrix'
            )
        if not self.tensor.symmetric:
            raise PreconditionError('chaos coefficients must be symmetrized; use ChaosCoefficients.from_entries')

    @classmethod
    def from_entries(cls, entries, shape):
        """Symmetrize raw coefficients; asymmetric input is accepted and noted in the log."""
        entries = np.asarray(entries, dtype=float)
        if entries.ndim < 1:
            raise DimensionMismatchError('a chaos needs order k >= 1')
        symmetric = symmetrize_tensor(entries)
        if np.all(np.isfinite(entries)):
            scale = max(1.0, float(np.max(np.abs(entries))))
            if float(np.max(np.abs(symmetric - entries))) > SYMMETRY_TOL * scale:
                logger.info('Symmetrizing order-%d chaos coefficients', entries.ndim)
        return cls(DenseTensor(symmetric, symmetric=True), tuple(int(x) for x in shape))

    @classmethod
    def random(cls, order, shape, rng, scale=1.0):
        size = int(np.prod(shape))
        return cls.from_entries(scale * rng.standard_normal((size,) * order), shape)

    @property
    def order(self):
        return self.tensor.order

    @property
    def entries(self):
        return self.tensor.entries


class ChaosEvaluation(NamedTuple):
    value: float
    gradient: np.ndarray
    hessian: np.ndarray


def _contract(entries, x, times):
    out = entries
    for _ in range(times):
        out = out @ x
    return out


def _contract_rows(entries, rows, times):
    """Contract ``times`` axes with each row of ``rows``; leading axis is the sample."""
    if times == 0:
        return np.broadcast_to(entries, (rows.shape[0],) + entries.shape).copy()
    out = np.tensordot(rows, entries, axes=([1], [entries.ndim - 1]))
    for _ in range(times - 1):
        out = np.einsum('n...i,ni->n...', out, rows)
    return out


def _point_vec(c, A):
    X = ambient_array(A)
    if X.shape != c.shape:
        raise DimensionMismatchError(f'chaos indexes {c.shape} matrices, got {X.shape}')
    return vec(X)


def eval_chaos(c, A):
    """Value, ambient gradient (shaped like A) and ambient Hessian (vec coordinates)."""
    x = _point_vec(c, A)
    k = c.order
    value = float(_contract(c.entries, x, k))
    gradient = mat(k * _contract(c.entries, x, k - 1), *c.shape)
    if k >= 2:
        hessian = k * (k - 1) * _contract(c.entries, x, k - 2)
    else:
        hessian = np.zeros((x.size, x.size))
    return ChaosEvaluation(value, gradient, hessian)


def chaos_derivative(c, A, order):
    """The order-ℓ derivative tensor at A, for 0 ≤ ℓ ≤ k."""
    k = c.order
    if not 0 <= order <= k:
        raise PreconditionError(f'derivative order must lie in [0, {k}], got {order}')
    x = _point_vec(c, A)
    factor = math.factorial(k) / math.factorial(k - order)
    return factor * _contract(c.entries, x, k - order)


def chaos_values(c, batch):
    """f_k on a stack of samples, shape (N,)."""
    return _contract_rows(c.entries, vec_rows(batch), c.order)


def as_functional(c, name=''):
    k = c.order

    def value(X):
        return float(_contract(c.entries, vec(X), k))

    def gradient(X):
        return mat(k * _contract(c.entries, vec(X), k - 1), *c.shape)

    def hessian(X):
        return eval_chaos(c, X).hessian

    def gradient_batch(batch):
        return mat_rows(k * _contract_rows(c.entries, vec_rows(batch), k - 1), c.shape)

    return SmoothFunctional(
        value=value,
        gradient=gradient,
        hessian=hessian,
        name=name or f'chaos-{k}',
        value_batch=lambda batch: chaos_values(c, batch),
        gradient_batch=gradient_batch,
    )


def linear_form(V, name='linear'):
    """X ↦ ⟨V, X⟩ as an order-1 chaos."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2:
        raise DimensionMismatchError(f'a linear form needs a matrix coefficient, got shape {V.shape}')
    return as_functional(ChaosCoefficients.from_entries(vec(V), V.shape), name=name)
