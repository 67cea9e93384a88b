"""Finite-difference cross-checks of the intrinsic calculus at random points."""
import logging
from typing import NamedTuple, Optional

import numpy as np

from bounds.services import format_number
from core.constants import MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL
from functionals.services import build_functional
from grassmann import services as grassmann
from stiefel import services as stiefel
from stiefel.services import BRANCH_GRADIENT, fd_gradient

logger = logging.getLogger(__name__)

CALCULUS = {MANIFOLD_STIEFEL: stiefel, MANIFOLD_GRASSMANN: grassmann}

# Relative to max(1, reference norm)
GRADIENT_TOL = 1e-6
MODULUS_SLACK = 1e-10
MODULUS_FD_TOL = 1e-4

# Largest absolute entry of the difference
IDENTITY_TOL = 1e-8
IDENTITY_TRIPLES = 100


def _array(value):
    return value.S if isinstance(value, grassmann.GrassmannTangent) else np.asarray(value, dtype=float)


def _ambient(point):
    return point.P if isinstance(point, grassmann.GrassmannPoint) else point.A


def _relative(error, reference):
    return float(error) / max(1.0, float(reference))


def random_direction(manifold, point, rng, tangent=True):
    """A random tangent vector at ``point``, or an ambient direction that is not tangent."""
    calculus = CALCULUS[manifold]
    if tangent:
        return calculus.random_tangent(point, rng)
    G = rng.standard_normal(_ambient(point).shape)
    return grassmann.sym_project(G) if manifold == MANIFOLD_GRASSMANN else G


def identity_error(f, manifold, point, V):
    """max |hessian_vector_via_identity − intrinsic_hessian_apply| over the entries."""
    calculus = CALCULUS[manifold]
    expected = _array(calculus.intrinsic_hessian_apply(f, point, V))
    return float(np.max(np.abs(_array(calculus.hessian_vector_via_identity(f, point, V)) - expected)))


class CrossCheck(NamedTuple):
    index: int
    gradient_error: float
    identity_error: float
    modulus: float
    branch: str
    hessian_opnorm: float
    modulus_fd_error: Optional[float]

    @property
    def modulus_excess(self):
        """How far |∇⁽²⁾f| exceeds ‖f''‖_op; non-positive when the inequality holds."""
        return self.modulus - self.hessian_opnorm

    @property
    def passes(self):
        return (
            self.gradient_error <= GRADIENT_TOL
            and self.identity_error <= IDENTITY_TOL
            and self.modulus_excess <= MODULUS_SLACK * max(1.0, self.hessian_opnorm)
            and (self.modulus_fd_error is None or self.modulus_fd_error <= MODULUS_FD_TOL)
        )


def cross_check(f, manifold, n, d, rng, index=0, tangent=True):
    """Ambient gradient against central differences, the Hessian against the
    gradient-of-inner-product identity, and the second-order modulus against
    ‖f''‖_op and a difference quotient.

    The identity is checked along a tangent direction, or along an arbitrary
    ambient one when ``tangent`` is False."""
    calculus = CALCULUS[manifold]
    point = calculus.sample_uniform(n, d, rng)
    X = _ambient(point)
    gradient = f.gradient(X)
    gradient_error = _relative(np.max(np.abs(fd_gradient(f, X) - gradient)), np.linalg.norm(gradient))

    V = random_direction(manifold, point, rng, tangent)
    error = identity_error(f, manifold, point, V)

    modulus = calculus.second_order_modulus(f, point)
    opnorm = calculus.intrinsic_hessian_opnorm(f, point)
    fd_error = None
    if modulus.branch == BRANCH_GRADIENT:
        estimate = calculus.second_order_modulus_fd(f, point, rng)
        fd_error = _relative(abs(estimate - modulus.value), modulus.value)
    return CrossCheck(index, gradient_error, error, modulus.value, modulus.branch, opnorm, fd_error)


class CrossCheckAudit(NamedTuple):
    manifold: str
    functional: str
    checks: tuple

    @property
    def passes(self):
        return all(check.passes for check in self.checks)


def cross_check_audit(f, manifold, n, d, count, rng, name=''):
    """``count`` cross-checks of ``f``; odd points use tangent directions, even ones arbitrary directions."""
    checks = tuple(cross_check(f, manifold, n, d, rng, index, tangent=bool(index % 2)) for index in range(count))
    audit = CrossCheckAudit(manifold, name, checks)
    failed = [check.index for check in checks if not check.passes]
    if failed:
        logger.warning('Derivative cross-checks failed on %s at points %s', manifold, failed)
    else:
        logger.info('Derivative cross-checks passed on %s (%d points)', manifold, count)
    return audit


def cross_check_rows(audit):
    yield ['point', 'gradient_error', 'identity_error', 'modulus', 'branch', 'hessian_opnorm', 'modulus_fd_error',
           'passes']
    for check in audit.checks:
        yield [check.index, format_number(check.gradient_error), format_number(check.identity_error),
               format_number(check.modulus), check.branch, format_number(check.hessian_opnorm),
               format_number(check.modulus_fd_error), int(check.passes)]


class IdentityAudit(NamedTuple):
    manifold: str
    errors: tuple

    @property
    def worst(self):
        return max(self.errors, default=0.0)

    @property
    def passes(self):
        return self.worst <= IDENTITY_TOL


def identity_audit(manifold, n, d, rng, count=IDENTITY_TRIPLES, functional='quadratic'):
    """The Hessian-vector identity on ``count`` fresh (functional, point, direction) triples.

    Odd triples use a tangent direction, even ones an arbitrary ambient direction.
    """
    calculus = CALCULUS[manifold]
    errors = []
    for index in range(count):
        f = build_functional(functional, manifold, n, d, rng).functional
        point = calculus.sample_uniform(n, d, rng)
        errors.append(identity_error(f, manifold, point, random_direction(manifold, point, rng, bool(index % 2))))
    audit = IdentityAudit(manifold, tuple(errors))
    logger.info('Hessian identity on %s: worst error %s over %d triples', manifold, format_number(audit.worst), count)
    return audit
