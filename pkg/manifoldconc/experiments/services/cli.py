"""
Subcommands of the experiment runner.

``run(argv)`` parses and executes one subcommand and returns the exit code:
0 when every check passes, 1 on a violated bound or failed audit, 2 on a
configuration or validity error. The ``conc`` management command exposes the
same subcommands through ``manage.py``.
"""
import argparse
import logging
import sys

from bounds.services import export_curve_csv, format_number
from core.constants import (
    ALL_MANIFOLDS,
    ALL_SUBSPACE_MODES,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_VIOLATION,
    LP_GRID,
    MANIFOLD_GRASSMANN,
    MANIFOLD_STIEFEL,
    STREAM_PROBLEM,
    STREAM_SAMPLES,
    SUBSPACE_ONTO,
)
from core.exceptions import ConfigError, ManifoldConcError
from core.matrix_io import write_matrix
from functionals.services import build_functional, load_quadratic_form
from montecarlo.services import (
    ALL_BOUNDS,
    GRADIENT_EUCLIDEAN,
    GRADIENT_INTRINSIC,
    dominates,
    empirical_tail,
    exp_moment_audit,
    export_inequality_csv,
    export_lp_growth_csv,
    export_moments_csv,
    export_report_csv,
    export_report_json,
    export_table_csv,
    export_taylor_csv,
    first_to_second_audit,
    lp_growth_audit,
    lsi_audit,
    manifold_for,
    moment_audit,
    poincare_audit,
    require_seed,
    resolve_threads,
    sample_points,
    substream,
    taylor_audit,
)

from .checks import cross_check_audit, cross_check_rows
from .manifest import RunManifest
from .options import experiment_config, require, resolve
from .selftest import CHECK_ORDER, SELFTEST_SEED, run_selftest

logger = logging.getLogger(__name__)

AUDIT_POINCARE = 'poincare'
AUDIT_LSI = 'lsi'
AUDIT_LP_GROWTH = 'lp-growth'
AUDIT_FIRST_TO_SECOND = 'first-to-second'
AUDIT_EXP_MOMENT = 'exp-moment'

ALL_AUDITS = [AUDIT_POINCARE, AUDIT_LSI, AUDIT_LP_GROWTH, AUDIT_FIRST_TO_SECOND, AUDIT_EXP_MOMENT]

# dest -> argparse keyword arguments; every flag defaults to None so that
# lower layers show through
OPTIONS = {
    'config': {'help': 'flat JSON file of option values'},
    'seed': {'type': int, 'help': 'master seed'},
    'threads': {'type': int, 'help': 'worker threads (default: MANIFOLDCONC_THREADS or all cores)'},
    'chunk_size': {'type': int, 'help': 'samples per random substream'},
    'out': {'help': 'root directory for run outputs'},
    'manifold': {'choices': ALL_MANIFOLDS},
    'n': {'type': int, 'help': 'ambient dimension'},
    'd': {'type': int, 'help': 'frame width / subspace dimension'},
    'samples': {'type': int, 'help': 'Monte Carlo sample size'},
    'prepass_samples': {'type': int, 'help': 'samples for norm estimation'},
    'count': {'type': int, 'help': 'number of points to write'},
    'subset': {'type': int, 'help': 'entries per moment family'},
    'functional': {'help': 'catalog functional name'},
    'matrix': {'help': 'matrix file for the quadratic form'},
    'trials': {'type': int, 'help': 'Taylor trials'},
    'checks': {'type': int, 'help': 'points for the finite-difference cross-checks'},
    'bound': {'choices': ALL_BOUNDS},
    'grid': {'help': 't-grid as start:stop:step'},
    'order': {'type': int, 'help': 'chaos order for thm1.3'},
    'mode': {'choices': ALL_SUBSPACE_MODES},
    'rank': {'type': int, 'help': 'subspace rank'},
    'opnorm_restarts': {'type': int},
    'opnorm_max_iter': {'type': int},
    'gradient': {'choices': [GRADIENT_INTRINSIC, GRADIENT_EUCLIDEAN]},
    'p_grid': {'help': 'comma-separated exponents'},
    'k': {'type': int, 'help': 'chaos order of the exponential moment'},
    'quick': {'action': 'store_const', 'const': True, 'help': 'reduced sample sizes'},
    'check': {'action': 'append', 'choices': CHECK_ORDER, 'help': 'run only this check (repeatable)'},
}

COMMON = ('config', 'seed', 'threads', 'chunk_size', 'out')

# subcommand -> (help, options, defaults)
SUBCOMMANDS = {
    'sample': (
        'write uniform samples as matrix files',
        ('manifold', 'n', 'd', 'count'),
        {'manifold': MANIFOLD_STIEFEL, 'count': 10},
    ),
    'moments': (
        'compare sample moments of Haar frames with their exact values',
        ('n', 'd', 'samples', 'subset'),
        {'subset': 16},
    ),
    'deriv-check': (
        'Taylor remainder slopes and finite-difference cross-checks',
        ('manifold', 'n', 'd', 'functional', 'matrix', 'trials', 'checks'),
        {'manifold': MANIFOLD_STIEFEL, 'functional': 'quadratic', 'trials': 50, 'checks': 10},
    ),
    'tail': (
        'empirical tail of a functional against a concentration bound',
        ('bound', 'manifold', 'n', 'd', 'samples', 'grid', 'functional', 'matrix', 'order', 'mode', 'rank',
         'prepass_samples', 'opnorm_restarts', 'opnorm_max_iter'),
        {'order': 3, 'mode': SUBSPACE_ONTO},
    ),
    'audit': (
        'Monte Carlo check of a functional inequality',
        ('manifold', 'n', 'd', 'samples', 'functional', 'matrix', 'gradient', 'p_grid', 'k'),
        {'manifold': MANIFOLD_STIEFEL, 'functional': 'linear', 'gradient': GRADIENT_INTRINSIC,
         'p_grid': ','.join(str(p) for p in LP_GRID), 'k': 2},
    ),
    'selftest': (
        'the invariant suite at fixed seeds',
        ('quick', 'check'),
        {'seed': SELFTEST_SEED, 'quick': False},
    ),
}


def _flag(name):
    return '--' + name.replace('_', '-')


def add_subcommands(parser):
    """Attach every subcommand to ``parser``; returns the subparsers action."""
    subparsers = parser.add_subparsers(dest='subcommand', required=True, metavar='subcommand')
    for name, (help_text, options, _) in SUBCOMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        if name == 'audit':
            sub.add_argument('kind', choices=ALL_AUDITS)
        for option in COMMON + options:
            sub.add_argument(_flag(option), dest=option, default=None, **OPTIONS[option])
    return subparsers


def build_parser(prog='conc'):
    parser = argparse.ArgumentParser(
        prog=prog, description='Concentration-of-measure experiments on Stiefel and Grassmann manifolds.',
    )
    add_subcommands(parser)
    return parser


def resolve_options(subcommand, options):
    """Layer defaults, settings, the config file and flags for one subcommand."""
    _, names, defaults = SUBCOMMANDS[subcommand]
    known = set(COMMON + names) - {'config'}
    if subcommand == 'audit':
        known.add('kind')
    values = resolve(options, known, defaults, config_path=options.get('config'))
    if subcommand == 'tail':
        require(values, ('bound',))
        values['manifold'] = manifold_for(values['bound'], values.get('manifold'))
    return values


# ─── Handlers ────────────────────────────────────────────────────────────────

class Run:
    """One subcommand invocation: resolved values, manifest and output directory."""

    def __init__(self, subcommand, values, stdout):
        self.subcommand = subcommand
        self.values = values
        self.stdout = stdout
        self.manifest = RunManifest(subcommand, values, values.get('seed'))
        self.directory = self.manifest.run_directory(values['out'])
        self.threads = resolve_threads(values.get('threads'))

    @property
    def hash(self):
        return self.manifest.digest

    def output(self, path):
        self.manifest.record(path)
        return path

    def echo(self, message):
        self.stdout.write(message + '\n')


def _functional(run, manifold, name):
    values = run.values
    n, d = values['n'], values['d']
    form = None
    if values.get('matrix'):
        form = load_quadratic_form(values['matrix'], n, n if manifold == MANIFOLD_GRASSMANN else d)
    rng = substream(values['seed'], STREAM_PROBLEM)
    return build_functional(name, manifold, n, d, rng, form=form).functional


def handle_sample(run):
    values = run.values
    require(values, ('n', 'd', 'seed'))
    seed = require_seed(values['seed'])
    n, d, count = values['n'], values['d'], values['count']
    if not 1 <= d <= n:
        raise ConfigError(f'need 1 <= d <= n, got n={n}, d={d}')
    if count < 1:
        raise ConfigError(f'count must be positive, got {count}')
    points = sample_points(values['manifold'], n, d, count, seed)
    for index, point in enumerate(points):
        run.output(write_matrix(run.directory / f'sample-{index:05d}.csv', point))
    run.echo(f'Wrote {count} {values["manifold"]} sample(s) to {run.directory}')
    return EXIT_OK


def handle_moments(run):
    values = run.values
    require(values, ('n', 'd', 'samples', 'seed'))
    cfg = experiment_config(values)
    audit = moment_audit(cfg.n, cfg.d, cfg.samples, cfg.seed, subset=values['subset'], chunk_size=cfg.chunk_size,
                         threads=run.threads)
    run.output(export_moments_csv(run.directory / 'moments.csv', audit, manifest_hash=run.hash))
    for row in audit.failures:
        run.echo(f'  {row.statistic}: {format_number(row.estimate)} vs {format_number(row.expected)} (z={row.z:.2f})')
    run.echo(f'Moments at (n, d) = ({cfg.n}, {cfg.d}): {"pass" if audit.passes else "FAIL"}')
    return EXIT_OK if audit.passes else EXIT_VIOLATION


def handle_deriv_check(run):
    values = run.values
    require(values, ('n', 'd', 'seed'))
    seed = require_seed(values['seed'])
    manifold, n, d = values['manifold'], values['n'], values['d']
    if not 1 <= d <= n:
        raise ConfigError(f'need 1 <= d <= n, got n={n}, d={d}')
    f = _functional(run, manifold, values['functional'])
    taylor = taylor_audit(f, manifold, n, d, values['trials'], substream(seed, STREAM_SAMPLES, 0))
    checks = cross_check_audit(f, manifold, n, d, values['checks'], substream(seed, STREAM_SAMPLES, 1),
                               name=values['functional'])
    run.output(export_taylor_csv(run.directory / 'taylor.csv', taylor, manifest_hash=run.hash))
    run.output(export_table_csv(run.directory / 'crosscheck.csv', cross_check_rows(checks),
                                f'derivative cross-checks on {manifold}', run.hash))
    run.echo(f'Taylor audit: {"pass" if taylor.passes else "FAIL"}; '
             f'cross-checks: {"pass" if checks.passes else "FAIL"}')
    return EXIT_OK if taylor.passes and checks.passes else EXIT_VIOLATION


def handle_tail(run):
    cfg = experiment_config(run.values)
    report = empirical_tail(cfg, threads=run.threads)
    verdict = dominates(report)
    run.output(export_report_csv(run.directory / 'tail.csv', report, manifest_hash=run.hash))
    run.output(export_report_json(run.directory / 'tail.json', report, manifest_hash=run.hash))
    run.output(export_curve_csv(run.directory / 'bound.csv', report.bound, report.grid, manifest_hash=run.hash))
    run.echo(f'{report.name} [{report.bound.provenance}]')
    run.echo(f'  mean {format_number(report.mean)} ± {format_number(report.std_error)}, '
             f'centering {format_number(report.centering)} ({report.centering_source})')
    run.echo(f'  {verdict.describe()}')
    return EXIT_OK if verdict.dominated else EXIT_VIOLATION


def _p_grid(text):
    if isinstance(text, (list, tuple)):
        return tuple(float(p) for p in text)
    try:
        return tuple(float(p) for p in str(text).split(',') if p.strip())
    except ValueError as exc:
        raise ConfigError(f'p-grid must be comma-separated numbers, got {text!r}') from exc


def handle_audit(run):
    values = run.values
    cfg = experiment_config(values)
    kind = values['kind']
    f = _functional(run, cfg.manifold, values['functional'])
    args = (f, cfg.manifold, cfg.n, cfg.d, cfg.samples, cfg.seed)
    options = {'chunk_size': cfg.chunk_size, 'threads': run.threads}
    path = run.directory / f'{kind}.csv'
    if kind == AUDIT_LP_GROWTH:
        audit = lp_growth_audit(*args, p_grid=_p_grid(values['p_grid']), gradient=values['gradient'], **options)
        run.output(export_lp_growth_csv(path, audit, manifest_hash=run.hash))
        for row in audit.rows:
            run.echo(f'  p={row.p:g}: {format_number(row.lhs)} <= {format_number(row.rhs)} {row.status}')
        passed = audit.passes
    elif kind == AUDIT_EXP_MOMENT:
        moment = exp_moment_audit(*args, k=values['k'], **options)
        rows = [['estimate', 'std_error', 'threshold', 'holds'],
                [format_number(moment.estimate), format_number(moment.std_error), format_number(moment.threshold),
                 int(moment.holds)]]
        run.output(export_table_csv(path, rows, f'exponential moment of order {values["k"]}', run.hash))
        run.echo(f'  E exp(...) = {format_number(moment.estimate)} ± {format_number(moment.std_error)}')
        passed = moment.holds
    else:
        audit_fn = {AUDIT_POINCARE: poincare_audit, AUDIT_LSI: lsi_audit,
                    AUDIT_FIRST_TO_SECOND: first_to_second_audit}[kind]
        audit = audit_fn(*args, **options)
        run.output(export_inequality_csv(path, audit, manifest_hash=run.hash))
        run.echo(f'  {format_number(audit.lhs)} <= {format_number(audit.rhs)} [{audit.provenance}]')
        passed = audit.holds
    run.echo(f'{kind} audit: {"pass" if passed else "FAIL"}')
    return EXIT_OK if passed else EXIT_VIOLATION


def handle_selftest(run):
    values = run.values
    seed = require_seed(values['seed'])
    result = run_selftest(run.directory, seed=seed, quick=bool(values['quick']), checks=values.get('check'),
                          threads=run.threads, chunk_size=values['chunk_size'], manifest_hash=run.hash)
    for path in result.outputs:
        run.output(path)
    for row in result.failures:
        run.echo(f'  FAILED {row.check}: {row.statistic} = {format_number(row.value)} '
                 f'(limit {format_number(row.limit)})')
    run.echo(f'Selftest: {len(result.rows) - len(result.failures)}/{len(result.rows)} checks passed')
    return EXIT_OK if result.passes else EXIT_VIOLATION


HANDLERS = {
    'sample': handle_sample,
    'moments': handle_moments,
    'deriv-check': handle_deriv_check,
    'tail': handle_tail,
    'audit': handle_audit,
    'selftest': handle_selftest,
}


def execute(subcommand, options, stdout=None, stderr=None):
    """Run a parsed subcommand; ``options`` maps dests to values (None = not given)."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        values = resolve_options(subcommand, options)
        invocation = Run(subcommand, values, stdout)
        logger.info('Starting %s (manifest %s)', subcommand, invocation.manifest.short)
        code = HANDLERS[subcommand](invocation)
    except ManifoldConcError as exc:
        logger.error('%s failed: %s', subcommand, exc)
        stderr.write(f'error: {exc}\n')
        return EXIT_CONFIG_ERROR
    invocation.manifest.finish(invocation.directory, code)
    return code


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv`` (default sys.argv[1:]) and execute it; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG_ERROR
    options = vars(args)
    return execute(options.pop('subcommand'), options, stdout=stdout, stderr=stderr)
