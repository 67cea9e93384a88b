"""
The invariant suite behind ``conc selftest``.

Every check draws from its own substream of the master seed and writes its
tables with fixed formatting, so two runs with the same seed and chunk size
produce identical CSV files whatever the thread count.
"""
import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from bounds.services import format_number
from core.constants import (
    MANIFOLD_GRASSMANN,
    MANIFOLD_STIEFEL,
    STREAM_PROBLEM,
    TAYLOR_FIRST_ORDER_SLOPE,
    TAYLOR_SECOND_ORDER_SLOPE,
)
from core.exceptions import ConfigError
from functionals.services import build_functional
from grassmann import services as grassmann
from matcalc.services import commutation_matrix, kron, vec
from montecarlo.services import (
    ExperimentConfig,
    dominates,
    empirical_tail,
    exp_moment_audit,
    export_inequality_csv,
    export_lp_growth_csv,
    export_moments_csv,
    export_report_csv,
    export_table_csv,
    export_taylor_csv,
    fault_injection,
    lp_growth_audit,
    lsi_audit,
    manifold_for,
    moment_audit,
    poincare_audit,
    substream,
    taylor_audit,
)
from stiefel.services import sample_uniform as sample_frame

from .checks import IDENTITY_TOL, MODULUS_FD_TOL, MODULUS_SLACK, cross_check_audit, cross_check_rows, identity_audit

logger = logging.getLogger(__name__)

SELFTEST_SEED = 2024
SELFTEST_FILE = 'selftest.csv'

IDENTITY_RTOL = 1e-12
ANGLE_TOL = 1e-9
LIPSCHITZ_SHAPES = ((5, 1), (8, 2), (20, 5))
TAIL_CASES = (
    ('grassmann-dist', 40, 2),
    ('dist-subspace', 50, 3),
    ('hw1', 60, 2),
    ('hw2', 60, 2),
    ('hw3', 60, 2),
    ('linf', 30, 2),
)


class SelftestPlan(NamedTuple):
    identity_instances: int
    moment_samples: int
    taylor_trials: int
    cross_checks: int
    lipschitz_pairs: int
    angle_pairs: int
    tail_samples: int
    inequality_samples: int
    exp_moment_samples: int


FULL = SelftestPlan(100, 200_000, 50, 100, 100_000, 1000, 200_000, 20_000, 20_000)
QUICK = SelftestPlan(10, 20_000, 10, 10, 10_000, 100, 20_000, 4000, 5000)


class SelftestRow(NamedTuple):
    check: str
    statistic: str
    value: float
    limit: float
    passed: bool


@dataclass
class SelftestContext:
    seed: int
    directory: Path
    plan: SelftestPlan
    threads: int = 1
    chunk_size: int = 4096
    manifest_hash: str = ''
    outputs: list = field(default_factory=list)

    def rng(self, check):
        return substream(self.seed, STREAM_PROBLEM, CHECK_ORDER.index(check))

    def write(self, exporter, name, *args):
        path = exporter(self.directory / name, *args, manifest_hash=self.manifest_hash)
        self.outputs.append(path)
        return path


def _relative_error(actual, expected):
    return float(np.max(np.abs(actual - expected))) / max(1.0, float(np.max(np.abs(expected))))


def check_matcalc(ctx):
    """Kronecker and commutation-matrix identities on random conformable shapes."""
    rng = ctx.rng('matcalc')
    worst = dict.fromkeys(
        ['bilinearity', 'associativity', 'transpose', 'inverse', 'mixed product', 'vec(ABC)', 'vec(AB)',
         'commutation', 'commutation swap'], 0.0,
    )

    def note(name, actual, expected):
        worst[name] = max(worst[name], _relative_error(actual, expected))

    for n, m in itertools.product(range(1, 6), repeat=2):
        p, q = 1 + n % 3, 1 + m % 2
        K = commutation_matrix(n, m)
        K_left, K_right = commutation_matrix(p, n).dense(), commutation_matrix(m, q).dense()
        for _ in range(ctx.plan.identity_instances):
            A, B, C = rng.standard_normal((n, m)), rng.standard_normal((m, n)), rng.standard_normal((m, n))
            note('bilinearity', kron(A, B + C), kron(A, B) + kron(A, C))
            note('associativity', kron(kron(A, B), C), kron(A, kron(B, C)))
            note('transpose', kron(A, B).T, kron(A.T, B.T))
            S = 4.0 * np.eye(n) + 0.2 * rng.standard_normal((n, n))
            T = 4.0 * np.eye(m) + 0.2 * rng.standard_normal((m, m))
            note('inverse', np.linalg.inv(kron(S, T)), kron(np.linalg.inv(S), np.linalg.inv(T)))
            D = rng.standard_normal((n, m))
            note('mixed product', kron(A, B) @ kron(B, D), kron(A @ B, B @ D))
            Y, E = rng.standard_normal((m, p)), rng.standard_normal((p, q))
            note('vec(ABC)', vec(A @ Y @ E), kron(E.T, A) @ vec(Y))
            note('vec(AB)', vec(A @ B), kron(np.eye(n), A) @ vec(B))
            note('commutation', K @ vec(A), vec(A.T))
            F = rng.standard_normal((p, q))
            note('commutation swap', K_left @ kron(A, F) @ K_right, kron(F, A))
    return [
        SelftestRow('matcalc', name, error, IDENTITY_RTOL, error <= IDENTITY_RTOL) for name, error in worst.items()
    ]


def check_moments(ctx):
    audit = moment_audit(8, 2, ctx.plan.moment_samples, ctx.seed, chunk_size=ctx.chunk_size, threads=ctx.threads)
    ctx.write(export_moments_csv, 'moments.csv', audit)
    largest = max(abs(row.z) for row in audit.rows)
    return [SelftestRow('moments', 'max |z| at (8, 2)', largest, audit.critical, audit.passes)]


def _quadratic(manifold, n, d, rng):
    return build_functional('quadratic', manifold, n, d, rng).functional


def check_taylor(ctx):
    rng = ctx.rng('taylor')
    rows = []
    for manifold in (MANIFOLD_STIEFEL, MANIFOLD_GRASSMANN):
        f = _quadratic(manifold, 10, 3, rng)
        audit = taylor_audit(f, manifold, 10, 3, ctx.plan.taylor_trials, rng)
        ctx.write(export_taylor_csv, f'taylor-{manifold}.csv', audit)
        first = [trial.first_slope for trial in audit.trials if trial.first_slope is not None]
        second = [trial.second_slope for trial in audit.trials if trial.second_slope is not None]
        rows.append(SelftestRow('taylor', f'min first-order slope on {manifold}', min(first, default=np.inf),
                                TAYLOR_FIRST_ORDER_SLOPE, audit.passes))
        rows.append(SelftestRow('taylor', f'min second-order slope on {manifold}', min(second, default=np.inf),
                                TAYLOR_SECOND_ORDER_SLOPE, audit.passes))
    return rows


def check_hessian(ctx):
    rng = ctx.rng('hessian')
    rows = []
    for manifold, n, d in ((MANIFOLD_STIEFEL, 8, 2), (MANIFOLD_GRASSMANN, 6, 2)):
        f = _quadratic(manifold, n, d, rng)
        audit = cross_check_audit(f, manifold, n, d, ctx.plan.cross_checks, rng, name='quadratic')
        ctx.outputs.append(export_table_csv(ctx.directory / f'crosscheck-{manifold}.csv', cross_check_rows(audit),
                                            f'derivative cross-checks on {manifold}', ctx.manifest_hash))
        identity = identity_audit(manifold, n, d, rng)
        excess = max(check.modulus_excess / max(1.0, check.hessian_opnorm) for check in audit.checks)
        fd_errors = [check.modulus_fd_error for check in audit.checks if check.modulus_fd_error is not None]
        fd = max(fd_errors, default=0.0)
        statistic = f'identity formula max error over {len(identity.errors)} triples on {manifold}'
        rows.append(SelftestRow('hessian', statistic, identity.worst, IDENTITY_TOL, identity.passes))
        rows.append(SelftestRow('hessian', f'modulus above op norm on {manifold}', excess, MODULUS_SLACK,
                                excess <= MODULUS_SLACK))
        rows.append(SelftestRow('hessian', f'modulus difference quotient on {manifold}', fd, MODULUS_FD_TOL,
                                fd <= MODULUS_FD_TOL))
    return rows


def check_lipschitz(ctx):
    rng = ctx.rng('lipschitz')
    rows = []
    for n, d in LIPSCHITZ_SHAPES:
        audit = grassmann.lipschitz_audit(n, d, ctx.plan.lipschitz_pairs, rng)
        rows.append(SelftestRow('lipschitz', f'max ratio at ({n}, {d})', audit.max_ratio, audit.sharp_bound,
                                audit.holds))
    witness = grassmann.lipschitz_ratio(*grassmann.lipschitz_witness(5))
    rows.append(SelftestRow('lipschitz', 'witness ratio at d = 1', witness, 1.0, witness > 1.0))
    return rows


def check_angles(ctx):
    rng = ctx.rng('angles')
    worst = 0.0
    for _ in range(ctx.plan.angle_pairs):
        A, A2 = sample_frame(8, 3, rng), sample_frame(8, 3, rng)
        cosines = np.cos(grassmann.principal_angles(A, A2)) ** 2
        worst = max(worst, float(np.max(np.abs(grassmann.projection_product_spectrum(A, A2) - cosines))))
    return [SelftestRow('angles', 'spectrum of P_A P_B against cos^2', worst, ANGLE_TOL, worst <= ANGLE_TOL)]


def check_tails(ctx):
    rows = []
    for bound, n, d in TAIL_CASES:
        cfg = ExperimentConfig(n=n, d=d, samples=ctx.plan.tail_samples, seed=ctx.seed, bound=bound,
                               manifold=manifold_for(bound), chunk_size=ctx.chunk_size)
        report = empirical_tail(cfg, threads=ctx.threads)
        ctx.write(export_report_csv, f'tail-{bound}.csv', report)
        verdict = dominates(report)
        injection = fault_injection(report)
        violations = int(np.count_nonzero(report.violations))
        if bound == 'dist-subspace':
            # E|MA| sits below its centering by Jensen; the root mean square does not
            centered, statistic = report.rms_within(report.centering), report.rms
        else:
            centered, statistic = report.mean_within(report.centering), report.mean
        rows.append(SelftestRow('tails', f'{bound} violations', violations, 0, verdict.dominated))
        rows.append(SelftestRow('tails', f'{bound} centering', statistic, report.centering, centered))
        rows.append(SelftestRow('tails', f'{bound} first fault divisor',
                                injection.first_divisor or 0, injection.divisors[-1], injection.powered))
    return rows


def check_inequalities(ctx):
    rng = ctx.rng('inequalities')
    rows = []
    samples = ctx.plan.inequality_samples
    for manifold, name in itertools.product((MANIFOLD_STIEFEL, MANIFOLD_GRASSMANN), ('linear', 'quadratic')):
        f = build_functional(name, manifold, 30, 2, rng).functional
        options = {'chunk_size': ctx.chunk_size, 'threads': ctx.threads}
        for audit in (poincare_audit(f, manifold, 30, 2, samples, ctx.seed, **options),
                      lsi_audit(f, manifold, 30, 2, samples, ctx.seed, **options)):
            ctx.write(export_inequality_csv, f'{audit.name}-{manifold}-{name}.csv', audit)
            rows.append(SelftestRow('inequalities', f'{audit.name} margin, {name} on {manifold}', audit.margin,
                                    -3.0 * audit.std_error, audit.holds))
        growth = lp_growth_audit(f, manifold, 30, 2, samples, ctx.seed, **options)
        ctx.write(export_lp_growth_csv, f'lp-growth-{manifold}-{name}.csv', growth)
        worst = min(row.rhs - row.lhs for row in growth.rows)
        rows.append(SelftestRow('inequalities', f'lp-growth worst margin, {name} on {manifold}', worst, 0,
                                growth.passes))
    return rows


def check_exp_moment(ctx):
    n, d = 30, 2
    f = build_functional('linear', MANIFOLD_STIEFEL, n, d, ctx.rng('exp-moment')).functional
    # unit ambient gradient, so the intrinsic gradient norm is at most 2/sqrt(n - 2) after scaling
    f = f.scaled(2.0 / np.sqrt(n - 2))
    moment = exp_moment_audit(f, MANIFOLD_STIEFEL, n, d, ctx.plan.exp_moment_samples, ctx.seed,
                              chunk_size=ctx.chunk_size, threads=ctx.threads)
    return [SelftestRow('exp-moment', 'E exp((n-2)|f|/(32e)) at (30, 2)', moment.estimate, moment.threshold,
                        moment.holds)]


CHECKS = {
    'matcalc': check_matcalc,
    'moments': check_moments,
    'taylor': check_taylor,
    'hessian': check_hessian,
    'lipschitz': check_lipschitz,
    'angles': check_angles,
    'tails': check_tails,
    'inequalities': check_inequalities,
    'exp-moment': check_exp_moment,
}

CHECK_ORDER = list(CHECKS)


class SelftestResult(NamedTuple):
    rows: tuple
    outputs: tuple

    @property
    def passes(self):
        return all(row.passed for row in self.rows)

    @property
    def failures(self):
        return [row for row in self.rows if not row.passed]


def selftest_rows(rows):
    yield ['check', 'statistic', 'value', 'limit', 'passed']
    for row in rows:
        yield [row.check, row.statistic, format_number(row.value), format_number(row.limit), int(row.passed)]


def run_selftest(directory, seed=SELFTEST_SEED, quick=False, checks=None, threads=1, chunk_size=4096,
                 manifest_hash=''):
    """Run the named checks (all by default) and write selftest.csv plus per-check tables."""
    names = list(checks) if checks else CHECK_ORDER
    unknown = sorted(set(names) - set(CHECKS))
    if unknown:
        raise ConfigError(f'unknown selftest check(s) {unknown}; expected some of {CHECK_ORDER}')
    ctx = SelftestContext(seed, Path(directory), QUICK if quick else FULL, threads, chunk_size, manifest_hash)
    rows = []
    for name in CHECK_ORDER:
        if name not in names:
            continue
        logger.info('Selftest check %s', name)
        found = CHECKS[name](ctx)
        for row in found:
            if not row.passed:
                logger.warning('Selftest %s failed: %s = %s (limit %s)', name, row.statistic, row.value, row.limit)
        rows.extend(found)
    ctx.outputs.append(export_table_csv(ctx.directory / SELFTEST_FILE, selftest_rows(rows),
                                        f'selftest seed={seed} {"quick" if quick else "full"}', manifest_hash))
    return SelftestResult(tuple(rows), tuple(ctx.outputs))
