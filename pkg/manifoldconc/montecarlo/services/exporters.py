"""CSV and JSON writers for tail reports and audits."""
import csv
import json
import logging
from pathlib import Path

import numpy as np

from bounds.services import format_number, provenance_header

from .tails import dominates, fault_injection

logger = logging.getLogger(__name__)


def _write_csv(path, rows, manifest_hash, provenance):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open('w', newline='') as handle:
        handle.write(provenance_header(manifest_hash, provenance))
        writer = csv.writer(handle, lineterminator='\n')
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.debug('Wrote %d rows to %s', max(count - 1, 0), path)
    return path


def _write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + '\n')
    return path


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def report_rows(report):
    yield ['t', 'p_hat', 'cp_upper', 'bound', 'violation']
    for t, p_hat, upper, bound, violation in zip(
        report.grid, report.p_hat, report.cp_upper, report.bound_values, report.violations
    ):
        yield [format_number(t), format_number(p_hat), format_number(upper), format_number(bound), int(violation)]


def export_report_csv(path, report, manifest_hash=''):
    """One row per grid point; a violation is a CP upper limit above the bound."""
    return _write_csv(path, report_rows(report), manifest_hash, report.bound.provenance)


def report_summary(report, manifest_hash=''):
    verdict = dominates(report)
    injection = fault_injection(report)
    return {
        'manifest': manifest_hash,
        'name': report.name,
        'description': report.description,
        'config': report.config,
        'seed': report.seed,
        'samples': report.samples,
        'centering': report.centering,
        'centering_source': report.centering_source,
        'one_sided': report.one_sided,
        'mean': report.mean,
        'mean_std_error': report.std_error,
        'rms': report.rms,
        'rms_std_error': report.rms_std_error,
        'bound': report.bound.describe(),
        'verdict': {
            'dominated': verdict.dominated,
            'certified': verdict.certified,
            'offending': list(verdict.offending),
            'text': verdict.describe(),
        },
        'fault_injection': {
            'divisors': list(injection.divisors),
            'violations': list(injection.violations),
            'first_divisor': injection.first_divisor,
            'powered': injection.powered,
        },
        'wall_time': report.wall_time,
    }


def export_report_json(path, report, manifest_hash=''):
    return _write_json(path, report_summary(report, manifest_hash))


def moment_rows(audit):
    yield ['statistic', 'expected', 'estimate', 'std_error', 'z', 'within_3sigma']
    for row in audit.rows:
        yield [row.statistic, format_number(row.expected), format_number(row.estimate),
               format_number(row.std_error), format_number(row.z), int(row.within_3sigma)]


def export_moments_csv(path, audit, manifest_hash=''):
    provenance = f'uniform Stiefel moments n={audit.n} d={audit.d} N={audit.samples} critical z={audit.critical:.4g}'
    return _write_csv(path, moment_rows(audit), manifest_hash, provenance)


def taylor_rows(audit):
    yield ['trial', 'first_slope', 'first_status', 'second_slope', 'second_status']
    for index, trial in enumerate(audit.trials):
        yield [index, format_number(trial.first_slope), trial.first_status,
               format_number(trial.second_slope), trial.second_status]


def export_taylor_csv(path, audit, manifest_hash=''):
    provenance = f'Taylor remainders on {audit.manifold}, steps {audit.steps[0]:g}..{audit.steps[-1]:g}'
    return _write_csv(path, taylor_rows(audit), manifest_hash, provenance)


def inequality_rows(audit):
    yield ['name', 'lhs', 'lhs_std_error', 'rhs', 'rhs_std_error', 'margin', 'holds']
    yield [audit.name, format_number(audit.lhs), format_number(audit.lhs_std_error), format_number(audit.rhs),
           format_number(audit.rhs_std_error), format_number(audit.margin), int(audit.holds)]


def export_inequality_csv(path, audit, manifest_hash=''):
    return _write_csv(path, inequality_rows(audit), manifest_hash, audit.provenance)


def lp_growth_rows(audit):
    yield ['p', 'lhs', 'lhs_std_error', 'rhs', 'rhs_std_error', 'status', 'heavy_tail']
    for row in audit.rows:
        yield [format_number(row.p), format_number(row.lhs), format_number(row.lhs_std_error),
               format_number(row.rhs), format_number(row.rhs_std_error), row.status, int(row.unstable)]


def export_lp_growth_csv(path, audit, manifest_hash=''):
    provenance = f'L^p growth with the {audit.gradient} gradient'
    return _write_csv(path, lp_growth_rows(audit), manifest_hash, provenance)


def export_table_csv(path, rows, provenance, manifest_hash=''):
    """A header row followed by data rows, already formatted."""
    return _write_csv(path, rows, manifest_hash, provenance)
