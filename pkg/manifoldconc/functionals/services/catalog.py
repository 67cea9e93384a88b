"""Named test functionals for the experiment runner."""
import logging
from typing import NamedTuple, Optional

import numpy as np

from core.constants import MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL
from core.exceptions import ConfigError, PreconditionError
from stiefel.services import SmoothFunctional

from .chaos import ChaosCoefficients, as_functional as chaos_functional, linear_form
from .quadratic import QuadraticForm, as_functional as quadratic_functional, det_form_d2

logger = logging.getLogger(__name__)


class CatalogEntry(NamedTuple):
    name: str
    manifold: str
    functional: SmoothFunctional
    mean: Optional[float]
    description: str


def _unit(M):
    return M / np.linalg.norm(M)


def _symmetric(rng, n):
    G = rng.standard_normal((n, n))
    return _unit(G + G.T)


def congruence_form(V, name='congruence'):
    """X ↦ ⟨X, VX⟩ on n×n matrices, V symmetric."""
    V = 0.5 * (np.asarray(V, dtype=float) + np.asarray(V, dtype=float).T)
    n = V.shape[0]
    return SmoothFunctional(
        value=lambda X: float(np.sum(X * (V @ X))),
        gradient=lambda X: 2.0 * V @ X,
        hessian=lambda X: 2.0 * np.kron(np.eye(n), V),
        name=name,
        hessian_vector=lambda X, H: 2.0 * V @ H,
        value_batch=lambda batch: np.einsum('nij,ik,nkj->n', batch, V, batch),
        gradient_batch=lambda batch: 2.0 * V @ batch,
    )


def _stiefel_constant(n, d, rng, form):
    return linear_form(np.zeros((n, d)), name='constant').scaled(1.0, 1.0), 1.0, 'f ≡ 1'


def _stiefel_linear(n, d, rng, form):
    return linear_form(_unit(rng.standard_normal((n, d)))), 0.0, '⟨V, A⟩ with ‖V‖_HS = 1'


def _stiefel_quadratic(n, d, rng, form):
    form = form or QuadraticForm.random(n, d, rng)
    return quadratic_functional(form), form.trace_centering, 'vec(A)ᵀ M vec(A), centered at tr(M)/n'


def _stiefel_half_norm(n, d, rng, form):
    functional = quadratic_functional(QuadraticForm.identity(n, d), name='half-norm').scaled(0.5)
    return functional, 0.5 * d, '½‖A‖², constant d/2'


def _stiefel_det2(n, d, rng, form):
    if d != 2:
        raise PreconditionError(f'the determinant functional needs d = 2, got d = {d}')
    C = rng.standard_normal((n, 2)) / np.sqrt(n)
    return quadratic_functional(det_form_d2(C), name='det2'), 0.0, 'det(AᵀC) for a fixed n×2 C'


def _stiefel_chaos3(n, d, rng, form):
    coefficients = ChaosCoefficients.random(3, (n, d), rng, scale=1.0 / (n * d))
    return chaos_functional(coefficients, name='chaos3'), 0.0, 'symmetric cubic chaos in the entries of A'


def _grassmann_constant(n, d, rng, form):
    return linear_form(np.zeros((n, n)), name='constant').scaled(1.0, 1.0), 1.0, 'f ≡ 1'


def _grassmann_linear(n, d, rng, form):
    V = _symmetric(rng, n)
    return linear_form(V), d / n * float(np.trace(V)), '⟨P, V⟩ for symmetric V, centered at (d/n)tr V'


def _grassmann_trace(n, d, rng, form):
    return linear_form(np.eye(n), name='trace'), float(d), 'tr P, constant d'


def _grassmann_congruence(n, d, rng, form):
    V = _symmetric(rng, n)
    return congruence_form(V), d / n * float(np.trace(V)), '⟨P, VP⟩, equal to ⟨P, V⟩ on G_{n,d}'


def _grassmann_quadratic(n, d, rng, form):
    form = form or QuadraticForm.random(n, n, rng)
    return quadratic_functional(form), None, 'vec(P)ᵀ M vec(P); mean estimated by Monte Carlo'


CATALOG = {
    MANIFOLD_STIEFEL: {
        'constant': _stiefel_constant,
        'linear': _stiefel_linear,
        'quadratic': _stiefel_quadratic,
        'half-norm': _stiefel_half_norm,
        'det2': _stiefel_det2,
        'chaos3': _stiefel_chaos3,
    },
    MANIFOLD_GRASSMANN: {
        'constant': _grassmann_constant,
        'linear': _grassmann_linear,
        'trace': _grassmann_trace,
        'congruence': _grassmann_congruence,
        'quadratic': _grassmann_quadratic,
    },
}


def available(manifold):
    return sorted(CATALOG.get(manifold, {}))


def build_functional(name, manifold, n, d, rng, form=None):
    """Instantiate a named functional; random coefficients come from ``rng``."""
    builders = CATALOG.get(manifold)
    if builders is None:
        raise ConfigError(f'unknown manifold {manifold!r}')
    if name not in builders:
        raise ConfigError(f'unknown functional {name!r} on {manifold}; expected one of {available(manifold)}')
    functional, mean, description = builders[name](n, d, rng, form)
    logger.debug('Built functional %s on %s (n=%d, d=%d)', name, manifold, n, d)
    return CatalogEntry(name, manifold, functional, mean, description)
