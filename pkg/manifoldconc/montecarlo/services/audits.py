"""
Numerical audits of the sampler, the calculus and the functional inequalities.

Every audit reports the Monte Carlo estimates with their standard errors and
a verdict at SIGMA_LEVEL standard errors.
"""
import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy import stats

from bounds import services as bounds
from bounds.services.constants import LOG_SOBOLEV, by_manifold
from core.constants import (
    BONFERRONI_ALPHA,
    DEFAULT_CHUNK_SIZE,
    ENTROPY_CLAMP,
    LP_GRID,
    LP_MAX_P,
    MANIFOLD_GRASSMANN,
    MANIFOLD_STIEFEL,
    SIGMA_LEVEL,
    STREAM_AUDIT_INDEX,
    STREAM_SAMPLES,
    TAYLOR_FIRST_ORDER_SLOPE,
    TAYLOR_SECOND_ORDER_SLOPE,
    TAYLOR_STEPS,
)
from core.exceptions import PreconditionError
from functionals.services import entry_moment_table
from grassmann import services as grassmann
from stiefel import services as stiefel

from .engine import map_samples, sample_batch
from .norms import euclidean_gradient_norms, gradient_norms, hessian_hs_norms
from .rng import substream

logger = logging.getLogger(__name__)

STATUS_PASS = 'PASS'
STATUS_DEGENERATE = 'PASS-degenerate'
STATUS_FAIL = 'FAIL'

GRADIENT_INTRINSIC = 'intrinsic'
GRADIENT_EUCLIDEAN = 'euclidean'


def _within(lhs, rhs, std_error, sigmas=SIGMA_LEVEL):
    return lhs <= rhs + sigmas * std_error


def _mean_and_error(values):
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return float(np.mean(values)), 0.0
    return float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(values.size))


def _gather(worker, manifold, n, d, samples, seed, chunk_size, threads):
    """Concatenate per-chunk dicts of per-sample arrays in chunk order."""
    results = map_samples(worker, manifold, n, d, samples, seed, STREAM_SAMPLES, chunk_size, threads)
    return {name: np.concatenate([result[name] for result in results]) for name in results[0]}


# ─── Moments ─────────────────────────────────────────────────────────────────

class MomentRow(NamedTuple):
    statistic: str
    expected: float
    estimate: float
    std_error: float

    @property
    def z(self):
        if self.std_error == 0.0:
            return 0.0 if abs(self.estimate - self.expected) <= 1e-10 else np.inf
        return abs(self.estimate - self.expected) / self.std_error

    @property
    def within_3sigma(self):
        return self.z <= SIGMA_LEVEL


class MomentAudit(NamedTuple):
    n: int
    d: int
    samples: int
    rows: tuple
    critical: float

    @property
    def failures(self):
        return tuple(row for row in self.rows if row.z > self.critical)

    @property
    def passes(self):
        return not self.failures


def bonferroni_critical(rows, alpha=BONFERRONI_ALPHA):
    """max(3, z_{1 − alpha/(2·rows)}): two-sided family-wise level alpha over ``rows`` statistics."""
    return max(SIGMA_LEVEL, float(stats.norm.ppf(1.0 - alpha / (2.0 * rows))))


def _index_subsets(n, d, seed, subset):
    """Random mixed-moment index sets drawn from the audit-index stream."""
    rng = substream(seed, STREAM_AUDIT_INDEX)
    size = n * d
    pairs = []
    while len(pairs) < min(subset, size * (size - 1) // 2):
        first, second = sorted(int(x) for x in rng.choice(size, 2, replace=False))
        if (first, second) not in pairs:
            pairs.append((first, second))
    triples = [tuple(int(x) for x in rng.integers(0, size, 3)) for _ in range(subset)]
    off_diagonal = []
    while len(off_diagonal) < min(subset, n * (n - 1) // 2):
        i, j = sorted(int(x) for x in rng.choice(n, 2, replace=False))
        if (i, j) not in off_diagonal:
            off_diagonal.append((i, j))
    return pairs, triples, off_diagonal


def _entry_name(index, d):
    return f'A[{index // d},{index % d}]'


def moment_audit(n, d, samples, seed, subset=16, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """Sample moments of A and P = AAᵀ on W_{n,d} against their exact values."""
    exact = entry_moment_table(n, d)
    pairs, triples, off_diagonal = _index_subsets(n, d, seed, subset)
    size = n * d
    first_idx, second_idx = np.array([p[0] for p in pairs], dtype=int), np.array([p[1] for p in pairs], dtype=int)
    triple_idx = np.array(triples, dtype=int).reshape(-1, 3)
    rows_i = np.array([p[0] for p in off_diagonal], dtype=int)
    rows_j = np.array([p[1] for p in off_diagonal], dtype=int)

    def worker(chunk, batch, rng):
        flat = batch.reshape(batch.shape[0], size)
        gram = batch @ np.swapaxes(batch, -1, -2)
        columns = [
            flat,
            flat ** 2,
            flat[:, first_idx] * flat[:, second_idx],
            flat[:, triple_idx[:, 0]] * flat[:, triple_idx[:, 1]] * flat[:, triple_idx[:, 2]],
            np.diagonal(gram, axis1=1, axis2=2),
            gram[:, rows_i, rows_j],
        ]
        values = np.concatenate(columns, axis=1)
        total = np.sum(flat ** 2, axis=1)
        return values.sum(axis=0), (values ** 2).sum(axis=0), float(np.max(np.abs(total - exact.squared_norm)))

    results = map_samples(worker, MANIFOLD_STIEFEL, n, d, samples, seed, STREAM_SAMPLES, chunk_size, threads)
    sums = np.zeros_like(results[0][0])
    squares = np.zeros_like(results[0][1])
    worst = 0.0
    for chunk_sum, chunk_squares, chunk_worst in results:
        sums += chunk_sum
        squares += chunk_squares
        worst = max(worst, chunk_worst)
    means = sums / samples
    errors = np.sqrt(np.maximum(squares / samples - means ** 2, 0.0) / (samples - 1))

    labels, expected = [], []
    for index in range(size):
        labels.append(f'E {_entry_name(index, d)}')
        expected.append(exact.first((index // d, index % d)))
    for index in range(size):
        labels.append(f'E {_entry_name(index, d)}^2')
        expected.append(exact.variance)
    for first, second in pairs:
        labels.append(f'E {_entry_name(first, d)}{_entry_name(second, d)}')
        expected.append(0.0)
    for triple in triples:
        labels.append('E ' + ''.join(_entry_name(index, d) for index in triple))
        expected.append(exact.third(*triple))
    for i in range(n):
        labels.append(f'E P[{i},{i}]')
        expected.append(exact.projection(i, i))
    for i, j in off_diagonal:
        labels.append(f'E P[{i},{j}]')
        expected.append(exact.projection(i, j))

    rows = [MomentRow(label, float(value), float(mean), float(error))
            for label, value, mean, error in zip(labels, expected, means, errors)]
    rows.append(MomentRow('max |sum A^2 - d|', 0.0, worst, 0.0))
    audit = MomentAudit(n, d, samples, tuple(rows), bonferroni_critical(len(rows)))
    logger.info('Moment audit (n=%d, d=%d, N=%d): %d rows, %d beyond z=%.2f', n, d, samples, len(rows),
                len(audit.failures), audit.critical)
    return audit


# ─── Taylor remainders ───────────────────────────────────────────────────────

class TaylorTrial(NamedTuple):
    first_slope: Optional[float]
    second_slope: Optional[float]
    first_status: str
    second_status: str

    @property
    def passes(self):
        return STATUS_FAIL not in (self.first_status, self.second_status)


class TaylorAudit(NamedTuple):
    manifold: str
    steps: tuple
    trials: tuple

    @property
    def passes(self):
        return all(trial.passes for trial in self.trials)


def taylor_steps(start=TAYLOR_STEPS[0], stop=TAYLOR_STEPS[1], count=TAYLOR_STEPS[2]):
    return tuple(float(h) for h in np.geomspace(start, stop, count))


def _fit_slope(steps, remainders, floor, threshold):
    """Slope of log remainder against log step, ignoring remainders at round-off.

    Theil–Sen rather than least squares: a remainder whose leading terms cancel
    near one step would otherwise drag the whole fit.
    """
    keep = remainders > floor
    if np.count_nonzero(keep) < 3:
        return None, STATUS_DEGENERATE
    slope = float(stats.theilslopes(np.log(remainders[keep]), np.log(steps[keep]))[0])
    return slope, STATUS_PASS if slope >= threshold else STATUS_FAIL


def _stiefel_expansion(f, rng, n, d):
    A = stiefel.sample_uniform(n, d, rng)
    V = stiefel.random_tangent(A, rng)
    gradient = f.gradient(A.A)
    intrinsic = stiefel.intrinsic_gradient(f, A).V

    def move(h):
        return stiefel.retract(A, V, h).A - A.A

    def hessian(delta):
        return stiefel.intrinsic_hessian_apply(f, A, delta)

    return A.A, gradient, intrinsic, move, hessian


def _grassmann_expansion(f, rng, n, d):
    P = grassmann.sample_uniform(n, d, rng)
    S = grassmann.random_tangent(P, rng)
    gradient = f.gradient(P.P)
    intrinsic = grassmann.intrinsic_gradient(f, P).S

    def move(h):
        return grassmann.retract(P, S, h).P - P.P

    def hessian(delta):
        return grassmann.intrinsic_hessian_apply(f, P, delta).S

    return P.P, gradient, intrinsic, move, hessian


def taylor_audit(f, manifold, n, d, trials, rng, steps=None):
    """Decay of the first- and second-order Taylor remainders along retraction curves.

    The first-order remainder uses the ambient gradient, the second-order one
    the intrinsic gradient and Hessian. Slopes must reach 1.9 and 2.5.
    """
    steps = np.asarray(steps if steps is not None else taylor_steps(), dtype=float)
    if steps.size < 3 or np.any(np.diff(steps) >= 0) or steps[-1] <= 0:
        raise PreconditionError('Taylor steps must be a positive decreasing ladder of at least 3 values')
    expansion = _grassmann_expansion if manifold == MANIFOLD_GRASSMANN else _stiefel_expansion
    results = []
    for _ in range(trials):
        X, gradient, intrinsic, move, hessian = expansion(f, rng, n, d)
        value = f(X)
        first, second = [], []
        for h in steps:
            delta = move(h)
            change = f(X + delta) - value
            first.append(abs(change - float(np.sum(gradient * delta))))
            quadratic = 0.5 * float(np.sum(hessian(delta) * delta))
            second.append(abs(change - float(np.sum(intrinsic * delta)) - quadratic))
        floor = 1e-13 * max(1.0, abs(value))
        first_slope, first_status = _fit_slope(steps, np.array(first), floor, TAYLOR_FIRST_ORDER_SLOPE)
        second_slope, second_status = _fit_slope(steps, np.array(second), floor, TAYLOR_SECOND_ORDER_SLOPE)
        results.append(TaylorTrial(first_slope, second_slope, first_status, second_status))
    audit = TaylorAudit(manifold, tuple(steps), tuple(results))
    logger.info('Taylor audit on %s (%d trials): %s', manifold, trials, 'pass' if audit.passes else 'FAIL')
    return audit


# ─── Functional inequalities ─────────────────────────────────────────────────

class InequalityAudit(NamedTuple):
    """lhs ≤ rhs asserted; ``margin`` is rhs − lhs."""

    name: str
    lhs: float
    rhs: float
    lhs_std_error: float
    rhs_std_error: float
    provenance: str

    @property
    def margin(self):
        return self.rhs - self.lhs

    @property
    def std_error(self):
        return float(np.hypot(self.lhs_std_error, self.rhs_std_error))

    @property
    def holds(self):
        return _within(self.lhs, self.rhs, self.std_error)


def _gradient_samples(f, manifold, n, d, samples, seed, chunk_size, threads, gradient=GRADIENT_INTRINSIC):
    def worker(chunk, batch, rng):
        if gradient == GRADIENT_EUCLIDEAN:
            norms = euclidean_gradient_norms(f, batch)
        else:
            norms = gradient_norms(f, manifold, batch)
        return {'value': f.values(batch), 'grad': norms}

    return _gather(worker, manifold, n, d, samples, seed, chunk_size, threads)


def poincare_audit(f, manifold, n, d, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """Var(f) ≤ c/(n−2)·E|∇f|², c = 4 on W_{n,d} and 8 on G_{n,d}."""
    data = _gradient_samples(f, manifold, n, d, samples, seed, chunk_size, threads)
    values = data['value']
    centered_sq = (values - values.mean()) ** 2
    lhs, lhs_error = _mean_and_error(centered_sq)
    lhs *= samples / (samples - 1)
    energy, energy_error = _mean_and_error(data['grad'] ** 2)
    constant = bounds.poincare_constant(n, manifold, d)
    audit = InequalityAudit('poincare', lhs, constant * energy, lhs_error, constant * energy_error,
                            'Poincaré inequality with the log-Sobolev constant')
    logger.info('Poincaré audit: %.6g <= %.6g (%s)', audit.lhs, audit.rhs, 'holds' if audit.holds else 'VIOLATED')
    return audit


def lsi_audit(f, manifold, n, d, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """Ent(f²) = E f² log f² − E f² log E f² against twice the log-Sobolev constant times E|∇f|²."""
    data = _gradient_samples(f, manifold, n, d, samples, seed, chunk_size, threads)
    squares = data['value'] ** 2
    mass = float(np.mean(squares))
    if mass <= 0.0:
        lhs, lhs_error = 0.0, 0.0
    else:
        terms = squares * np.log(np.maximum(squares, ENTROPY_CLAMP))
        lhs = float(np.mean(terms)) - mass * np.log(mass)
        influence = terms - (np.log(mass) + 1.0) * squares
        lhs_error = float(np.std(influence, ddof=1) / np.sqrt(samples))
    energy, energy_error = _mean_and_error(data['grad'] ** 2)
    constant = bounds.entropy_constant(n, manifold, d)
    audit = InequalityAudit('lsi', float(lhs), constant * energy, lhs_error, constant * energy_error,
                            'log-Sobolev inequality, Ent(f^2) <= 2c E|grad f|^2')
    logger.info('LSI audit: %.6g <= %.6g (%s)', audit.lhs, audit.rhs, 'holds' if audit.holds else 'VIOLATED')
    return audit


class LpGrowthRow(NamedTuple):
    p: float
    lhs: float
    rhs: float
    lhs_std_error: float
    rhs_std_error: float
    unstable: bool

    @property
    def status(self):
        if self.p == 2:
            return STATUS_DEGENERATE
        std_error = float(np.hypot(self.lhs_std_error, self.rhs_std_error))
        return STATUS_PASS if _within(self.lhs, self.rhs, std_error) else STATUS_FAIL


class LpGrowthAudit(NamedTuple):
    gradient: str
    rows: tuple

    @property
    def passes(self):
        return all(row.status != STATUS_FAIL for row in self.rows)


def _lp_norm(values, p):
    """(E|g|^p)^{1/p} with a delta-method error inflated to the largest single term."""
    powers = np.abs(values) ** p
    moment = float(np.mean(powers))
    if moment == 0.0:
        return 0.0, 0.0, False
    se_moment = float(np.std(powers, ddof=1) / np.sqrt(powers.size))
    largest = float(np.max(powers)) / powers.size
    unstable = largest > 0.01 * moment
    if unstable:
        se_moment = max(se_moment, largest)
    norm = moment ** (1.0 / p)
    return norm, norm * se_moment / (p * moment), unstable


def lp_growth_audit(f, manifold, n, d, samples, seed, p_grid=LP_GRID, gradient=GRADIENT_INTRINSIC,
                    chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """‖g‖_p ≤ (‖g‖₂² + c(p−2)/(n−2)·‖∇g‖_p²)^{1/2} for each p.

    ``gradient`` selects the intrinsic or the ambient gradient.
    """
    p_grid = tuple(float(p) for p in p_grid)
    if any(p < 2 or p > LP_MAX_P for p in p_grid):
        raise PreconditionError(f'p must lie in [2, {LP_MAX_P}], got {p_grid}')
    if gradient not in (GRADIENT_INTRINSIC, GRADIENT_EUCLIDEAN):
        raise PreconditionError(f'gradient must be {GRADIENT_INTRINSIC!r} or {GRADIENT_EUCLIDEAN!r}')
    data = _gradient_samples(f, manifold, n, d, samples, seed, chunk_size, threads, gradient)
    values, grads = data['value'], data['grad']
    norm2, norm2_error, _ = _lp_norm(values, 2.0)
    rows = []
    for p in p_grid:
        lhs, lhs_error, unstable = _lp_norm(values, p)
        grad_norm, grad_error, grad_unstable = _lp_norm(grads, p)
        rhs = bounds.lp_growth_rhs(p, n, norm2, grad_norm, manifold)
        if p == 2:
            lhs, rhs_error = norm2, 0.0
        elif rhs > 0:
            slope = by_manifold(LOG_SOBOLEV, manifold) * (p - 2) / (n - 2)
            rhs_error = float(np.hypot(norm2 * norm2_error, slope * grad_norm * grad_error)) / rhs
        else:
            rhs_error = 0.0
        rows.append(LpGrowthRow(p, lhs, rhs, lhs_error, rhs_error, unstable or grad_unstable))
    audit = LpGrowthAudit(gradient, tuple(rows))
    logger.info('L^p growth audit (%s gradient, p in %s): %s', gradient, p_grid, 'pass' if audit.passes else 'FAIL')
    return audit


def first_to_second_audit(f, manifold, n, d, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """E|∇f|² ≤ constant·E‖f''‖²_HS for functionals whose intrinsic gradient has mean zero."""
    constant = bounds.first_to_second_constant(n, d, manifold)

    def worker(chunk, batch, rng):
        return {'grad': gradient_norms(f, manifold, batch), 'hess': hessian_hs_norms(f, manifold, batch)}

    data = _gather(worker, manifold, n, d, samples, seed, chunk_size, threads)
    lhs, lhs_error = _mean_and_error(data['grad'] ** 2)
    energy, energy_error = _mean_and_error(data['hess'] ** 2)
    audit = InequalityAudit('first-to-second', lhs, constant * energy, lhs_error, constant * energy_error,
                            'first-to-second order L2 inequality for a centered gradient')
    logger.info('First-to-second audit: %.6g <= %.6g', audit.lhs, audit.rhs)
    return audit


def exp_moment_audit(f, manifold, n, d, samples, seed, k=2, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """E exp((n−2)/(32e)|f|^{2/k}) (64e on G_{n,d}) for a normalized functional."""

    def worker(chunk, batch, rng):
        return {'value': f.values(batch)}

    data = _gather(worker, manifold, n, d, samples, seed, chunk_size, threads)
    return bounds.exp_moment_lhs(data['value'], n, k, manifold)


def sample_points(manifold, n, d, count, seed):
    """``count`` uniform samples from the first chunk of the sample stream."""
    return sample_batch(manifold, n, d, count, substream(seed, STREAM_SAMPLES, 0))
