import math

import numpy as np

from django.test import SimpleTestCase

from bounds.services import grassmann_dist_tail, lipschitz_tail
from core.constants import MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL
from core.exceptions import ConfigError, EvaluationError, ValidityError
from montecarlo.services import (
    ExperimentConfig,
    TailReport,
    auto_grid,
    build_experiment,
    clopper_pearson_upper,
    dominates,
    empirical_tail,
    evaluate_batch,
    fault_injection,
    manifold_for,
    survival_counts,
    tally_tail,
)


class ClopperPearsonTests(SimpleTestCase):

    def test_zero_successes_has_closed_form(self):
        self.assertAlmostEqual(float(clopper_pearson_upper(0, 1000)[()]), 1.0 - 0.01 ** (1.0 / 1000), places=12)

    def test_all_successes(self):
        np.testing.assert_array_equal(clopper_pearson_upper([1000], 1000), [1.0])

    def test_upper_limit_exceeds_the_estimate(self):
        counts = np.array([1, 10, 100, 500])
        upper = clopper_pearson_upper(counts, 1000)
        self.assertTrue(np.all(upper > counts / 1000))
        self.assertTrue(np.all(np.diff(upper) > 0))


class SurvivalTests(SimpleTestCase):

    def test_counts_include_ties(self):
        counts = survival_counts([0.1, 0.5, 0.5, 2.0], [0.0, 0.5, 1.0, 3.0])
        np.testing.assert_array_equal(counts, [4, 3, 1, 0])

    def test_auto_grid_ends_at_the_floor(self):
        bound = grassmann_dist_tail(40, 2)
        grid = auto_grid(bound, points=100, floor=1e-4)
        self.assertEqual(len(grid), 100)
        self.assertGreater(grid[0], 0.0)
        self.assertAlmostEqual(bound(grid[-1]), 1e-4, places=10)
        self.assertAlmostEqual(grid[-1], math.sqrt(64 * 2 * math.log(2e4) / 39), places=6)


class EvaluationTests(SimpleTestCase):

    def test_failing_sample_is_named(self):
        batch = np.zeros((5, 2, 2))
        batch[3, 0, 0] = np.nan

        def values(samples):
            if np.isnan(samples).any():
                raise ValueError('nan input')
            return samples.sum(axis=(1, 2))

        with self.assertRaises(EvaluationError) as caught:
            evaluate_batch(values, batch, start=100)
        self.assertEqual(caught.exception.sample_index, 103)

    def test_non_finite_value_is_named(self):
        with self.assertRaises(EvaluationError) as caught:
            evaluate_batch(lambda samples: np.array([0.0, np.inf, 1.0]), np.zeros((3, 2, 2)), start=10)
        self.assertEqual(caught.exception.sample_index, 11)


def _report(counts, samples, bound, grid, deviations=None):
    return TailReport(
        name='synthetic',
        grid=np.asarray(grid, dtype=float),
        counts=np.asarray(counts, dtype=np.int64),
        samples=samples,
        bound=bound,
        centering=0.0,
        mean=0.0,
        std_error=0.0,
        seed=0,
        deviations=deviations,
    )


class VerdictTests(SimpleTestCase):

    def test_zero_functional_is_dominated(self):
        grid = np.linspace(0.01, 1.0, 20)
        tally = tally_tail(lambda batch: np.zeros(len(batch)), 0.0, grid, MANIFOLD_STIEFEL, 6, 2, 2000, 3)
        np.testing.assert_array_equal(tally.counts, 0)
        report = _report(tally.counts, 2000, lipschitz_tail(1.0, 6), grid)
        self.assertTrue(dominates(report).dominated)

    def test_inflated_frequencies_are_flagged(self):
        grid = [0.5, 4.0, 6.0]
        report = _report([5000, 5000, 5000], 10000, grassmann_dist_tail(40, 2), grid)
        verdict = dominates(report)
        self.assertFalse(verdict.dominated)
        self.assertEqual(verdict.offending, (4.0, 6.0))
        self.assertIn('violated', verdict.describe())

    def test_empty_tail_is_not_a_violation(self):
        bound = grassmann_dist_tail(40, 2)
        report = _report([0], 1000, bound, [10.0])
        self.assertGreater(report.cp_upper[0], bound(10.0))
        self.assertTrue(dominates(report).dominated)


class ExperimentRegistryTests(SimpleTestCase):

    def test_unknown_bound(self):
        cfg = ExperimentConfig(n=10, d=2, samples=1000, seed=1, bound='thm9')
        with self.assertRaises(ConfigError):
            build_experiment(cfg)

    def test_manifold_must_match(self):
        cfg = ExperimentConfig(n=10, d=2, samples=1000, seed=1, bound='grassmann-dist')
        with self.assertRaises(ConfigError):
            build_experiment(cfg)
        self.assertEqual(manifold_for('grassmann-dist'), MANIFOLD_GRASSMANN)
        self.assertEqual(manifold_for('lipschitz', MANIFOLD_GRASSMANN), MANIFOLD_GRASSMANN)
        with self.assertRaises(ConfigError):
            manifold_for('thm1.1', MANIFOLD_GRASSMANN)

    def test_hanson_wright_three_validity(self):
        cfg = ExperimentConfig(n=10, d=2, samples=1000, seed=1, bound='hw3')
        with self.assertRaises(ValidityError):
            build_experiment(cfg)

    def test_problem_instance_is_reproducible(self):
        cfg = ExperimentConfig(n=12, d=2, samples=1000, seed=5, bound='hw1')
        first, second = build_experiment(cfg), build_experiment(cfg)
        self.assertEqual(first.centering, second.centering)
        self.assertEqual(first.bound(0.3), second.bound(0.3))


class EmpiricalTailTests(SimpleTestCase):

    def test_grassmann_distance(self):
        cfg = ExperimentConfig(n=40, d=2, samples=20000, seed=7, bound='grassmann-dist', manifold=MANIFOLD_GRASSMANN)
        report = empirical_tail(cfg)
        self.assertEqual(len(report.grid), 100)
        self.assertAlmostEqual(report.centering, 3.8, places=12)
        self.assertTrue(report.mean_within(3.8))
        self.assertTrue(dominates(report).dominated)
        self.assertTrue(fault_injection(report).powered)

    def test_distance_to_subspace(self):
        cfg = ExperimentConfig(n=50, d=3, samples=20000, seed=3, bound='dist-subspace')
        report = empirical_tail(cfg)
        expected = 3.0 / math.sqrt(50)
        self.assertAlmostEqual(report.centering, expected, places=12)
        self.assertTrue(report.rms_within(expected))
        # E|MA| sits below the centering by Jensen
        self.assertLess(report.mean, expected)
        self.assertTrue(dominates(report).dominated)
        self.assertTrue(fault_injection(report).powered)

    def test_linear_form(self):
        cfg = ExperimentConfig(n=30, d=2, samples=5000, seed=2, bound='linf')
        report = empirical_tail(cfg)
        self.assertTrue(report.mean_within(0.0))
        self.assertTrue(dominates(report).dominated)
        self.assertTrue(report.bound.certified)

    def test_thread_count_does_not_change_the_report(self):
        cfg = ExperimentConfig(n=20, d=2, samples=3000, seed=9, bound='hw1', chunk_size=500, grid=(0.1, 0.2, 0.4))
        serial = empirical_tail(cfg, threads=1)
        threaded = empirical_tail(cfg, threads=3)
        np.testing.assert_array_equal(serial.counts, threaded.counts)
        self.assertEqual(serial.mean, threaded.mean)
        self.assertEqual(serial.rms, threaded.rms)

    def test_explicit_grid_is_kept(self):
        cfg = ExperimentConfig(n=12, d=2, samples=1000, seed=4, bound='lipschitz', grid=(0.0, 0.5))
        report = empirical_tail(cfg)
        np.testing.assert_array_equal(report.grid, [0.0, 0.5])
        self.assertTrue(report.one_sided)
        self.assertLessEqual(report.counts[1], report.counts[0])


class FaultInjectionTests(SimpleTestCase):

    def setUp(self):
        self.bound = grassmann_dist_tail(40, 2)
        self.deviations = np.sort(np.abs(np.random.default_rng(17).normal(0.0, 0.2, 20000)))
        grid = auto_grid(self.bound)
        self.report = _report(survival_counts(self.deviations, grid), 20000, self.bound, grid, self.deviations)

    def test_weakened_bound_gets_its_own_grid(self):
        weakened = self.bound.weakened(100)
        retested = self.report.retested(weakened)
        self.assertLess(retested.grid[-1], self.report.grid[-1] / 5)
        self.assertAlmostEqual(weakened(retested.grid[-1]), 1e-4, places=10)
        np.testing.assert_array_equal(retested.counts, survival_counts(self.deviations, retested.grid))

    def test_first_divisor_exposes_the_weakened_constant(self):
        self.assertTrue(dominates(self.report).dominated)
        injection = fault_injection(self.report)
        self.assertEqual(injection.first_divisor, 100)
        self.assertTrue(all(injection.violations))

    def test_without_deviations_the_grid_is_kept(self):
        report = _report(self.report.counts, 20000, self.bound, self.report.grid)
        retested = report.retested(self.bound.weakened(100))
        np.testing.assert_array_equal(retested.grid, report.grid)
        np.testing.assert_array_equal(retested.counts, report.counts)

    def test_hanson_wright_sweep_is_powered(self):
        cfg = ExperimentConfig(n=60, d=2, samples=20000, seed=11, bound='hw1')
        report = empirical_tail(cfg)
        self.assertEqual(len(report.deviations), 20000)
        self.assertTrue(dominates(report).dominated)
        self.assertTrue(fault_injection(report).powered)
