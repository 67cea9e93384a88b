"""
Empirical tails, Clopper–Pearson bands and bound-domination verdicts.

Exceedance counts are integers and the moment sums are accumulated in chunk
order, so a report does not depend on the number of worker threads.
"""
import dataclasses
import logging
import time
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import optimize, stats

from bounds.services import TailBound
from core.constants import (
    AUTO_GRID_FLOOR,
    AUTO_GRID_POINTS,
    CP_CONFIDENCE,
    DEFAULT_CHUNK_SIZE,
    FAULT_DIVISORS,
    SIGMA_LEVEL,
    STREAM_SAMPLES,
)
from core.exceptions import ConfigError, EvaluationError

from .engine import map_samples
from .experiments import build_experiment

logger = logging.getLogger(__name__)


def clopper_pearson_upper(counts, samples, confidence=CP_CONFIDENCE):
    """One-sided exact upper confidence limits for k successes out of ``samples``."""
    counts = np.asarray(counts, dtype=np.int64)
    upper = np.ones(counts.shape, dtype=float)
    inner = counts < samples
    upper[inner] = stats.beta.ppf(confidence, counts[inner] + 1, samples - counts[inner])
    return upper


def survival_counts(deviations, grid):
    """#{i : deviation_i ≥ t} for every t in the grid."""
    ordered = np.sort(np.asarray(deviations, dtype=float))
    return ordered.size - np.searchsorted(ordered, np.asarray(grid, dtype=float), side='left')


def auto_grid(bound, points=AUTO_GRID_POINTS, floor=AUTO_GRID_FLOOR):
    """``points`` equally spaced t > 0 up to where the bound falls to ``floor``."""
    hi = 1.0
    for _ in range(200):
        if bound(hi) <= floor:
            break
        hi *= 2.0
    else:
        raise ConfigError(f'bound never drops below {floor}; pass an explicit grid [{bound.provenance}]')
    t_max = optimize.brentq(lambda t: bound(t) - floor, 0.0, hi)
    return tuple(float(t) for t in np.linspace(t_max / points, t_max, points))


def evaluate_batch(values, batch, start):
    """values(batch) as floats; failures and non-finite results name the global sample index."""
    try:
        result = np.asarray(values(batch), dtype=float).reshape(len(batch))
    except Exception as exc:
        index = start
        for offset in range(len(batch)):
            try:
                values(batch[offset:offset + 1])
            except Exception:
                index = start + offset
                break
        logger.exception('Functional evaluation failed at sample %d', index)
        raise EvaluationError(f'functional evaluation failed: {exc}', index) from exc
    bad = np.flatnonzero(~np.isfinite(result))
    if bad.size:
        raise EvaluationError(f'functional returned {result[bad[0]]!r}', start + int(bad[0]))
    return result


class ChunkTally(NamedTuple):
    counts: np.ndarray
    power_sums: np.ndarray
    deviations: np.ndarray


class TailTally(NamedTuple):
    counts: np.ndarray
    mean: float
    std_error: float
    rms: float
    rms_std_error: float
    deviations: np.ndarray


def tally_tail(values, center, grid, manifold, n, d, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=1,
               one_sided=False):
    """Exceedance counts of |f − center| (f − center when one-sided), the moments of f and the sorted deviations."""

    def worker(chunk, batch, rng):
        fvalues = evaluate_batch(values, batch, chunk.start)
        deviations = fvalues - center
        if not one_sided:
            deviations = np.abs(deviations)
        power_sums = np.array([np.sum(fvalues ** power) for power in (1, 2, 4)])
        return ChunkTally(survival_counts(deviations, grid), power_sums, deviations)

    tallies = map_samples(worker, manifold, n, d, samples, seed, STREAM_SAMPLES, chunk_size, threads)
    counts = np.zeros(len(grid), dtype=np.int64)
    power_sums = np.zeros(3)
    for tally in tallies:
        counts += tally.counts
        power_sums += tally.power_sums
    first, second, fourth = power_sums / samples
    variance = max(second - first ** 2, 0.0) * samples / (samples - 1)
    second_variance = max(fourth - second ** 2, 0.0) * samples / (samples - 1)
    rms = float(np.sqrt(second))
    rms_std_error = float(np.sqrt(second_variance / samples)) / (2.0 * rms) if rms > 0 else 0.0
    deviations = np.sort(np.concatenate([tally.deviations for tally in tallies]))
    return TailTally(counts, float(first), float(np.sqrt(variance / samples)), rms, rms_std_error, deviations)


@dataclass(frozen=True)
class TailReport:
    """Empirical survival of the centered functional against a bound curve."""

    name: str
    grid: np.ndarray
    counts: np.ndarray
    samples: int
    bound: TailBound
    centering: float
    mean: float
    std_error: float
    seed: int
    rms: float = 0.0
    rms_std_error: float = 0.0
    centering_source: str = 'exact'
    one_sided: bool = False
    description: str = ''
    wall_time: float = 0.0
    config: Optional[dict] = None
    deviations: Optional[np.ndarray] = None

    @property
    def p_hat(self):
        return self.counts / self.samples

    @property
    def cp_upper(self):
        return clopper_pearson_upper(self.counts, self.samples)

    @property
    def bound_values(self):
        return self.bound.evaluate(self.grid)

    @property
    def violations(self):
        """CP upper limit above the bound at a grid point with at least one exceedance.

        Without an exceedance the upper limit only reflects the sample size, so a
        zero-count point never flags. Grid points beyond every observed deviation
        therefore cannot expose a weakened bound; ``retested`` builds a fresh grid.
        """
        return (self.counts > 0) & (self.cp_upper > self.bound_values)

    def with_bound(self, bound):
        return dataclasses.replace(self, bound=bound)

    def retested(self, bound):
        """The same sample against ``bound`` on that bound's own automatic grid.

        Falls back to the current grid and counts when the deviations were not kept
        or the bound has no automatic grid.
        """
        if self.deviations is None:
            return self.with_bound(bound)
        try:
            grid = np.asarray(auto_grid(bound), dtype=float)
        except ConfigError:
            return self.with_bound(bound)
        return dataclasses.replace(self, bound=bound, grid=grid, counts=survival_counts(self.deviations, grid))

    def mean_within(self, expected, sigmas=SIGMA_LEVEL):
        """The empirical mean of f lies within ``sigmas`` standard errors of ``expected``."""
        return abs(self.mean - expected) <= sigmas * self.std_error

    def rms_within(self, expected, sigmas=SIGMA_LEVEL):
        """(E f²)^{1/2} lies within ``sigmas`` standard errors of ``expected``."""
        return abs(self.rms - expected) <= sigmas * self.rms_std_error


class Verdict(NamedTuple):
    dominated: bool
    offending: tuple
    certified: bool

    def describe(self):
        if self.dominated:
            text = 'dominated'
        else:
            text = f'violated at t = {", ".join(format(t, ".6g") for t in self.offending)}'
        if not self.certified:
            text += ' (bound uses an empirical supremum)'
        return text


def dominates(report):
    """True iff no grid point has its Clopper–Pearson upper limit above the bound."""
    offending = tuple(float(t) for t in report.grid[report.violations])
    if offending:
        logger.warning('%s: %d grid point(s) violate %s', report.name, len(offending), report.bound.provenance)
    return Verdict(not offending, offending, report.bound.certified)


class FaultInjection(NamedTuple):
    divisors: tuple
    violations: tuple
    first_divisor: Optional[int]

    @property
    def powered(self):
        """Some weakened constant exposed a violation."""
        return self.first_divisor is not None


def fault_injection(report, divisors=FAULT_DIVISORS):
    """Re-test the sample against the bound with C divided by each divisor.

    Every weakened bound is checked on its own automatic grid, which ends where
    that bound reaches the grid floor and so reaches into the observed deviations.
    """
    violations = []
    first = None
    for divisor in divisors:
        count = int(np.count_nonzero(report.retested(report.bound.weakened(divisor)).violations))
        violations.append(count)
        if count and first is None:
            first = divisor
    logger.info('%s: fault injection first exposed at divisor %s', report.name, first)
    return FaultInjection(tuple(divisors), tuple(violations), first)


def empirical_tail(cfg, threads=1, experiment=None):
    """Sample cfg.samples points, evaluate the centered functional and build the TailReport."""
    if experiment is None:
        experiment = build_experiment(cfg, threads=threads)
    grid = np.asarray(cfg.grid if cfg.grid is not None else auto_grid(experiment.bound), dtype=float)
    started = time.perf_counter()
    logger.info('Tail experiment %s: N=%d, seed=%d, (n, d)=(%d, %d)', experiment.name, cfg.samples, cfg.seed,
                cfg.n, cfg.d)
    tally = tally_tail(
        experiment.values, experiment.centering, grid, experiment.manifold, cfg.n, cfg.d, cfg.samples, cfg.seed,
        cfg.chunk_size, threads, experiment.one_sided,
    )
    wall_time = time.perf_counter() - started
    logger.info('Tail experiment %s finished in %.2fs', experiment.name, wall_time)
    return TailReport(
        name=experiment.name,
        grid=grid,
        counts=tally.counts,
        samples=cfg.samples,
        bound=experiment.bound,
        centering=experiment.centering,
        mean=tally.mean,
        std_error=tally.std_error,
        seed=cfg.seed,
        rms=tally.rms,
        rms_std_error=tally.rms_std_error,
        centering_source=experiment.centering_source,
        one_sided=experiment.one_sided,
        description=experiment.description,
        wall_time=wall_time,
        config=cfg.as_dict(),
        deviations=tally.deviations,
    )
