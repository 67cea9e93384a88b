"""
Registry of tail experiments, one per bound name.

A builder draws the problem instance (random coefficients, reference
subspaces) from the problem stream, estimates the norm inputs on the
pre-pass stream and returns the functional, its centering and the bound.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from bounds import services as bounds
from core.constants import MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL, STREAM_PROBLEM
from core.exceptions import ConfigError, MatrixFormatError
from core.matrix_io import read_matrix
from functionals import services as functionals
from grassmann import services as grassmann
from matcalc.services import op_norm

from .norms import (
    euclidean_gradient_norms,
    gradient_norms,
    hanson_wright_statistics,
    hessian_opnorms,
    l2_input,
    max_input,
    mean_estimate,
    projected_direction_norms,
    run_prepass,
)
from .rng import substream

logger = logging.getLogger(__name__)

CENTERING_EXACT = 'exact'
CENTERING_PREPASS = 'pre-pass mean'

# Bound name -> manifold it lives on (None: either)
BOUND_MANIFOLDS = {
    'thm1.1': MANIFOLD_STIEFEL,
    'thm1.2': MANIFOLD_GRASSMANN,
    'thm1.3': MANIFOLD_STIEFEL,
    'thm1.4': MANIFOLD_GRASSMANN,
    'hw1': MANIFOLD_STIEFEL,
    'hw2': MANIFOLD_STIEFEL,
    'hw3': MANIFOLD_STIEFEL,
    'transf': MANIFOLD_STIEFEL,
    'dist-subspace': MANIFOLD_STIEFEL,
    'grassmann-dist': MANIFOLD_GRASSMANN,
    'lipschitz': None,
    'linf': MANIFOLD_STIEFEL,
}

ALL_BOUNDS = list(BOUND_MANIFOLDS)

# Polynomial degree of the Grassmann catalog functionals
GRASSMANN_ORDERS = {'constant': 1, 'linear': 1, 'trace': 1, 'congruence': 2, 'quadratic': 2}
CONSTANT_GRADIENT = ('constant', 'linear', 'trace')


@dataclass(frozen=True)
class Experiment:
    name: str
    manifold: str
    values: Callable[[np.ndarray], np.ndarray]
    centering: float
    bound: bounds.TailBound
    description: str
    centering_source: str = CENTERING_EXACT
    one_sided: bool = False


@dataclass
class _Context:
    cfg: object
    threads: int

    def __post_init__(self):
        self.rng = substream(self.cfg.seed, STREAM_PROBLEM)

    @property
    def n(self):
        return self.cfg.n

    @property
    def d(self):
        return self.cfg.d

    def prepass(self, manifold, statistics):
        cfg = self.cfg
        return run_prepass(statistics, manifold, cfg.n, cfg.d, cfg.prepass_samples, cfg.seed, cfg.chunk_size,
                           self.threads)


def manifold_for(bound, requested=None):
    """The manifold a bound is tested on; ``requested`` must agree with a fixed one."""
    if bound not in BOUND_MANIFOLDS:
        raise ConfigError(f'unknown bound {bound!r}; expected one of {ALL_BOUNDS}')
    fixed = BOUND_MANIFOLDS[bound]
    if fixed is None:
        return requested or MANIFOLD_STIEFEL
    if requested is not None and requested != fixed:
        raise ConfigError(f'bound {bound} lives on the {fixed} manifold, not {requested}')
    return fixed


def _centering(mean, statistics):
    if mean is not None:
        return float(mean), CENTERING_EXACT
    estimate, std_error = mean_estimate(statistics['value'])
    logger.info('Centering at the pre-pass mean %.6g (std error %.2g)', estimate, std_error)
    return estimate, CENTERING_PREPASS


def _quadratic_form(ctx, n, d):
    if ctx.cfg.matrix:
        return functionals.load_quadratic_form(ctx.cfg.matrix, n, d)
    return None


def _catalog_entry(ctx, manifold, default):
    name = ctx.cfg.functional or default
    side = ctx.n if manifold == MANIFOLD_GRASSMANN else ctx.d
    form = _quadratic_form(ctx, ctx.n, side) if name == 'quadratic' else None
    return functionals.build_functional(name, manifold, ctx.n, ctx.d, ctx.rng, form=form)


def _second_order(ctx, manifold):
    entry = _catalog_entry(ctx, manifold, 'quadratic' if manifold == MANIFOLD_STIEFEL else 'linear')
    f = entry.functional
    statistics = ctx.prepass(manifold, lambda batch: {
        'value': f.values(batch),
        'grad': gradient_norms(f, manifold, batch),
        'hess_op': hessian_opnorms(f, manifold, batch),
    })
    centering, source = _centering(entry.mean, statistics)
    bound = bounds.second_order_tail(
        ctx.n, l2_input('grad_hs2', statistics['grad']), max_input('hess_op_sup', statistics['hess_op']), manifold,
    )
    return Experiment('', manifold, f.values, centering, bound, entry.description, source)


def build_thm1_1(ctx):
    return _second_order(ctx, MANIFOLD_STIEFEL)


def build_thm1_2(ctx):
    return _second_order(ctx, MANIFOLD_GRASSMANN)


def chaos_mean(coefficients):
    """Exact mean of an order-k chaos on W_{n,d} for k odd or k = 2; None otherwise."""
    k = coefficients.order
    if k % 2:
        return 0.0
    if k == 2:
        return float(np.trace(coefficients.entries)) / coefficients.shape[0]
    return None


def _random_chaos(order, shape, rng):
    """Gaussian coefficients scaled so that f_k(A) is of order one."""
    size = int(np.prod(shape))
    G = rng.standard_normal((size,) * order)
    return functionals.ChaosCoefficients.from_entries(G * shape[0] ** (order / 2.0) / np.linalg.norm(G), shape)


def _derivative_norm_stat(coefficients, ell):
    """Per-sample ‖f^{(ℓ)}(A)‖_op; the HS norm stands in for ℓ ≥ 3."""

    def statistic(batch):
        if ell == 1:
            return np.linalg.norm(functionals.chaos_functional(coefficients).gradients(batch), axis=(1, 2))
        tensors = [functionals.chaos_derivative(coefficients, A, ell) for A in batch]
        if ell == 2:
            return np.array([np.linalg.norm(T, 2) for T in tensors])
        return np.array([np.linalg.norm(T) for T in tensors])

    return statistic


def _kth_order_input(k, tensor, cfg):
    norm = op_norm(tensor, restarts=cfg.opnorm_restarts, max_iter=cfg.opnorm_max_iter)
    if norm.exact:
        return bounds.NormInput.exact(f'deriv{k}_op', norm.value)
    return bounds.NormInput.bracketed(f'deriv{k}_op', norm.value, norm.upper)


def build_thm1_3(ctx):
    shape = (ctx.n, ctx.d)
    if ctx.cfg.matrix:
        coefficients = functionals.load_chaos(ctx.cfg.matrix, shape)
    else:
        coefficients = _random_chaos(ctx.cfg.order, shape, ctx.rng)
    k = coefficients.order
    stats = {ell: _derivative_norm_stat(coefficients, ell) for ell in range(1, k)}
    statistics = ctx.prepass(MANIFOLD_STIEFEL, lambda batch: {
        'value': functionals.chaos_values(coefficients, batch),
        **{f'deriv{ell}': stat(batch) for ell, stat in stats.items()},
    })
    centering, source = _centering(chaos_mean(coefficients), statistics)
    l2norms = [l2_input(f'deriv{ell}_op2', statistics[f'deriv{ell}']) for ell in range(1, k)]
    kop = _kth_order_input(k, math.factorial(k) * coefficients.entries, ctx.cfg)
    bound = bounds.kth_order_tail(ctx.n, k, l2norms, kop, MANIFOLD_STIEFEL)
    return Experiment('', MANIFOLD_STIEFEL, lambda batch: functionals.chaos_values(coefficients, batch), centering,
                      bound, f'order-{k} chaos in the entries of A', source)


def build_thm1_4(ctx):
    entry = _catalog_entry(ctx, MANIFOLD_GRASSMANN, 'linear')
    f = entry.functional
    k = GRASSMANN_ORDERS[entry.name]
    P0 = np.diag([1.0] * ctx.d + [0.0] * (ctx.n - ctx.d))
    statistics = ctx.prepass(MANIFOLD_GRASSMANN, lambda batch: {
        'value': f.values(batch),
        'grad': euclidean_gradient_norms(f, batch),
    })
    centering, source = _centering(entry.mean, statistics)
    if k == 1:
        l2norms = []
        kop = bounds.NormInput.exact('deriv1_op', float(np.linalg.norm(f.gradient(P0))))
    else:
        l2norms = [l2_input('deriv1_op2', statistics['grad'])]
        kop = bounds.NormInput.exact('deriv2_op', float(np.linalg.norm(f.hessian(P0), 2)))
    bound = bounds.kth_order_tail(ctx.n, k, l2norms, kop, MANIFOLD_GRASSMANN)
    return Experiment('', MANIFOLD_GRASSMANN, f.values, centering, bound, entry.description, source)


def _hanson_wright(ctx, variant):
    bounds.hanson_wright_validity(ctx.n, ctx.d, variant)
    Q = _quadratic_form(ctx, ctx.n, ctx.d) or functionals.QuadraticForm.random(ctx.n, ctx.d, ctx.rng)
    if variant == 1:
        norms = {'M_hs': Q.hs_norm, 'M_op': Q.op_norm}
    else:
        statistics = ctx.prepass(MANIFOLD_STIEFEL, lambda batch: hanson_wright_statistics(Q, batch))
        first = l2_input('PU_hs2', statistics['PU_hs']) if variant == 2 else l2_input('PBP_hs2', statistics['PBP_hs'])
        norms = {first.name: first, 'PBP_op_sup': max_input('PBP_op_sup', statistics['PBP_op'])}
    bound = bounds.hanson_wright_tail(ctx.n, ctx.d, variant, norms, centering=Q.trace_centering)
    return Experiment('', MANIFOLD_STIEFEL, lambda batch: functionals.quadratic_values(Q, batch),
                      Q.trace_centering, bound, 'vec(A)ᵀ M vec(A) centered at tr(M)/n')


def build_hw1(ctx):
    return _hanson_wright(ctx, 1)


def build_hw2(ctx):
    return _hanson_wright(ctx, 2)


def build_hw3(ctx):
    return _hanson_wright(ctx, 3)


def build_transf(ctx):
    size = ctx.n * ctx.d
    if ctx.cfg.matrix:
        M = read_matrix(ctx.cfg.matrix)
        if M.shape[1] != size:
            raise MatrixFormatError(f'{ctx.cfg.matrix}: M needs {size} columns, got {M.shape[1]}')
    else:
        M = ctx.rng.standard_normal((size, size)) / np.sqrt(size)
    functional = functionals.NormFunctional(M, ctx.n, ctx.d)
    bound = bounds.norm_conc_tail(ctx.n, functional.op_norm, centering=functional.centering)
    return Experiment('', MANIFOLD_STIEFEL, functional.values, functional.centering, bound,
                      '|M vec(A)| centered at |M|_HS/sqrt(n)')


def build_dist_subspace(ctx):
    if ctx.cfg.matrix:
        Q = functionals.load_subspace(ctx.cfg.matrix, ctx.n)
    else:
        Q = functionals.projection_onto(ctx.rng.standard_normal((ctx.n, ctx.cfg.rank or ctx.d)))
    rank = functionals.projection_rank(Q)
    functional = functionals.NormFunctional.for_subspace(Q, ctx.d, ctx.cfg.mode)
    bound = bounds.dist_subspace_tail(ctx.n, ctx.d, rank, ctx.cfg.mode)
    return Experiment('', MANIFOLD_STIEFEL, functional.values, bound.centering, bound,
                      f'distance of A to a rank-{rank} subspace ({ctx.cfg.mode})')


def build_grassmann_dist(ctx):
    if ctx.cfg.matrix:
        Q = functionals.load_subspace(ctx.cfg.matrix, ctx.n)
        if functionals.projection_rank(Q) != ctx.d:
            raise MatrixFormatError(f'{ctx.cfg.matrix}: reference subspace must have dimension {ctx.d}')
        P_F = grassmann.GrassmannPoint(Q)
    else:
        P_F = grassmann.sample_uniform(ctx.n, ctx.d, ctx.rng)
    bound = bounds.grassmann_dist_tail(ctx.n, ctx.d)
    return Experiment('', MANIFOLD_GRASSMANN, lambda batch: functionals.grassmann_dist_values(P_F, batch),
                      bound.centering, bound, '|P - P_F|^2 for a fixed subspace F')


def build_lipschitz(ctx):
    manifold = ctx.cfg.manifold
    entry = _catalog_entry(ctx, manifold, 'linear')
    f = entry.functional
    statistics = ctx.prepass(manifold, lambda batch: {
        'value': f.values(batch),
        'grad': gradient_norms(f, manifold, batch),
    })
    centering, source = _centering(entry.mean, statistics)
    if entry.name in CONSTANT_GRADIENT:
        P0 = np.eye(ctx.n)[:, :ctx.d] if manifold == MANIFOLD_STIEFEL else np.eye(ctx.n)
        L = bounds.NormInput.bracketed('L', float(np.max(statistics['grad'])), float(np.linalg.norm(f.gradient(P0))))
    else:
        L = max_input('L', statistics['grad'])
    bound = bounds.lipschitz_tail(L, ctx.n, manifold)
    return Experiment('', manifold, f.values, centering, bound, entry.description, source, one_sided=True)


def build_linf(ctx):
    if ctx.cfg.matrix:
        V = read_matrix(ctx.cfg.matrix)
        if V.shape != (ctx.n, ctx.d):
            raise MatrixFormatError(f'{ctx.cfg.matrix}: V must be {ctx.n}x{ctx.d}, got {V.shape}')
    else:
        V = ctx.rng.standard_normal((ctx.n, ctx.d))
        V /= np.linalg.norm(V)
    f = functionals.linear_form(V)
    statistics = ctx.prepass(MANIFOLD_STIEFEL, lambda batch: {'PV': projected_direction_norms(V, batch)})
    pv_norm = bounds.NormInput.bracketed('PV_hs_sup', float(np.max(statistics['PV'])), float(np.linalg.norm(V)))
    bound = bounds.linear_form_tail(ctx.n, pv_norm)
    return Experiment('', MANIFOLD_STIEFEL, f.values, 0.0, bound, '⟨V, A⟩ for a fixed V')


EXPERIMENTS = {
    'thm1.1': build_thm1_1,
    'thm1.2': build_thm1_2,
    'thm1.3': build_thm1_3,
    'thm1.4': build_thm1_4,
    'hw1': build_hw1,
    'hw2': build_hw2,
    'hw3': build_hw3,
    'transf': build_transf,
    'dist-subspace': build_dist_subspace,
    'grassmann-dist': build_grassmann_dist,
    'lipschitz': build_lipschitz,
    'linf': build_linf,
}


def build_experiment(cfg, threads=1, bound: Optional[str] = None):
    """The experiment for ``bound`` (default cfg.bound) under ``cfg``."""
    name = bound or cfg.bound
    if name not in EXPERIMENTS:
        raise ConfigError(f'unknown bound {name!r}; expected one of {ALL_BOUNDS}')
    manifold = manifold_for(name, cfg.manifold if BOUND_MANIFOLDS[name] is None else None)
    if manifold != cfg.manifold:
        raise ConfigError(f'bound {name} lives on the {manifold} manifold, the configuration says {cfg.manifold}')
    experiment = EXPERIMENTS[name](_Context(cfg, threads))
    logger.debug('Built experiment %s: %s', name, experiment.bound.provenance)
    return dataclasses.replace(experiment, name=name)
