"""Smooth functionals on an ambient matrix space, analytic or finite-difference backed."""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from core.constants import FD_HESSIAN_STEP, FD_STEP, VEC_ORDER

logger = logging.getLogger(__name__)

PROVENANCE_ANALYTIC = 'analytic'
PROVENANCE_FINITE_DIFFERENCE = 'finite-difference'


def _flat(X):
    return np.asarray(X, dtype=float).reshape(-1, order=VEC_ORDER)


def _shaped(v, shape):
    return v.reshape(shape, order=VEC_ORDER)


def fd_gradient(value, X, step=FD_STEP):
    """Central-difference gradient of a scalar field, one entry at a time."""
    X = np.asarray(X, dtype=float)
    base = _flat(X)
    grad = np.empty_like(base)
    for k in range(base.size):
        plus, minus = base.copy(), base.copy()
        plus[k] += step
        minus[k] -= step
        grad[k] = (value(_shaped(plus, X.shape)) - value(_shaped(minus, X.shape))) / (2.0 * step)
    return _shaped(grad, X.shape)


def fd_jacobian(field, X, step=FD_STEP):
    """Central-difference Jacobian of a matrix field, in vec coordinates."""
    X = np.asarray(X, dtype=float)
    base = _flat(X)
    columns = []
    for k in range(base.size):
        plus, minus = base.copy(), base.copy()
        plus[k] += step
        minus[k] -= step
        columns.append((_flat(field(_shaped(plus, X.shape))) - _flat(field(_shaped(minus, X.shape)))) / (2.0 * step))
    return np.column_stack(columns)


def fd_hessian(value, X, step=FD_HESSIAN_STEP):
    """Second differences of a scalar field, symmetrized."""
    X = np.asarray(X, dtype=float)
    base = _flat(X)
    size = base.size
    hess = np.empty((size, size))
    for k in range(size):
        for l in range(k, size):
            corners = []
            for sk, sl in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                point = base.copy()
                point[k] += sk * step
                point[l] += sl * step
                corners.append(value(_shaped(point, X.shape)))
            hess[k, l] = hess[l, k] = (corners[0] - corners[1] - corners[2] + corners[3]) / (4.0 * step * step)
    return hess


@dataclass(frozen=True)
class SmoothFunctional:
    """A C² functional on an ambient matrix space.

    ``hessian`` returns the full Hessian in vec coordinates. The optional
    callables are fast paths: a matrix-free Hessian-vector product and
    batched value/gradient evaluation over a leading sample axis.
    """

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray]
    provenance: str = PROVENANCE_ANALYTIC
    name: str = ''
    hessian_vector: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    value_batch: Optional[Callable[[np.ndarray], np.ndarray]] = None
    gradient_batch: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, X):
        return float(self.value(np.asarray(X, dtype=float)))

    def hvp(self, X, H):
        """f''(X) applied to the direction H, returned with the shape of H."""
        if self.hessian_vector is not None:
            return np.asarray(self.hessian_vector(X, H), dtype=float)
        return _shaped(self.hessian(X) @ _flat(H), np.shape(H))

    def hvp_at(self, X):
        """H ↦ f''(X)[H] with the Hessian evaluated once."""
        if self.hessian_vector is not None:
            return lambda H: np.asarray(self.hessian_vector(X, H), dtype=float)
        hess = self.hessian(X)
        return lambda H: _shaped(hess @ _flat(H), np.shape(H))

    def values(self, batch):
        if self.value_batch is not None:
            return np.asarray(self.value_batch(batch), dtype=float)
        return np.array([self.value(X) for X in batch], dtype=float)

    def gradients(self, batch):
        if self.gradient_batch is not None:
            return np.asarray(self.gradient_batch(batch), dtype=float)
        return np.stack([self.gradient(X) for X in batch])

    def scaled(self, factor, shift=0.0):
        """The functional factor·f + shift, keeping the fast paths."""
        return SmoothFunctional(
            value=lambda X: factor * self.value(X) + shift,
            gradient=lambda X: factor * self.gradient(X),
            hessian=lambda X: factor * self.hessian(X),
            provenance=self.provenance,
            name=self.name,
            hessian_vector=None if self.hessian_vector is None else (lambda X, H: factor * self.hessian_vector(X, H)),
            value_batch=None if self.value_batch is None else (lambda B: factor * self.value_batch(B) + shift),
            gradient_batch=None if self.gradient_batch is None else (lambda B: factor * self.gradient_batch(B)),
        )

    @classmethod
    def finite_difference(cls, value, gradient=None, step=FD_STEP, hessian_step=FD_HESSIAN_STEP, name=''):
        """Back missing derivatives with central differences.

        With an analytic gradient the Hessian is the symmetrized difference
        quotient of the gradient; otherwise second differences of the value.
        """
        if gradient is None:
            def grad(X):
                return fd_gradient(value, X, step)

            def hess(X):
                return fd_hessian(value, X, hessian_step)
        else:
            grad = gradient

            def hess(X):
                jac = fd_jacobian(gradient, X, step)
                return 0.5 * (jac + jac.T)

        return cls(value=value, gradient=grad, hessian=hess, provenance=PROVENANCE_FINITE_DIFFERENCE, name=name)
