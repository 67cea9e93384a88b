"""Small analytic functionals shared by the manifold tests."""
import numpy as np

from matcalc.services import mat, vec
from stiefel.services import SmoothFunctional


def quadratic(M):
    """X ↦ vec(X)ᵀ M vec(X) for a symmetric M."""
    M = 0.5 * (M + M.T)

    def value(X):
        x = vec(X)
        return float(x @ M @ x)

    def gradient(X):
        return 2.0 * mat(M @ vec(X), *X.shape)

    return SmoothFunctional(value=value, gradient=gradient, hessian=lambda X: 2.0 * M, name='quadratic')


def random_quadratic(rng, size, scale=1.0):
    G = rng.standard_normal((size, size))
    return quadratic(0.5 * scale * (G + G.T))


def linear(V):
    V = np.asarray(V, dtype=float)
    return SmoothFunctional(
        value=lambda X: float(np.sum(V * X)),
        gradient=lambda X: V.copy(),
        hessian=lambda X: np.zeros((V.size, V.size)),
        name='linear',
    )


def half_squared_norm(size):
    return SmoothFunctional(
        value=lambda X: 0.5 * float(np.sum(X * X)),
        gradient=lambda X: np.array(X, dtype=float),
        hessian=lambda X: np.eye(size),
        name='half-squared-norm',
    )


def trace(n):
    return linear(np.eye(n))
