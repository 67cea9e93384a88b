import numpy as np

from django.test import SimpleTestCase

from core.constants import MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL
from core.exceptions import PreconditionError, ValidityError
from functionals.services import build_functional
from montecarlo.services import (
    GRADIENT_EUCLIDEAN,
    STATUS_DEGENERATE,
    STATUS_PASS,
    bonferroni_critical,
    exp_moment_audit,
    first_to_second_audit,
    lp_growth_audit,
    lsi_audit,
    moment_audit,
    poincare_audit,
    taylor_audit,
    taylor_steps,
)


def _functional(name, manifold, n, d, seed=0):
    return build_functional(name, manifold, n, d, np.random.default_rng(seed)).functional


class MomentAuditTests(SimpleTestCase):

    def test_uniform_moments(self):
        audit = moment_audit(8, 2, 20000, seed=1)
        self.assertTrue(audit.passes, [row for row in audit.failures])
        expected = {row.statistic: row.expected for row in audit.rows}
        self.assertAlmostEqual(expected['E A[0,0]^2'], 1 / 8)
        self.assertAlmostEqual(expected['E P[0,0]'], 1 / 4)
        self.assertEqual(audit.rows[-1].statistic, 'max |sum A^2 - d|')

    def test_same_seed_same_table(self):
        first = moment_audit(5, 2, 2000, seed=4, chunk_size=500)
        second = moment_audit(5, 2, 2000, seed=4, chunk_size=500, threads=2)
        self.assertEqual(first.rows, second.rows)

    def test_bonferroni_critical_value(self):
        self.assertEqual(bonferroni_critical(1), 3.0)
        self.assertGreater(bonferroni_critical(100), 3.5)


class TaylorAuditTests(SimpleTestCase):

    def test_quadratic_on_stiefel(self):
        f = _functional('quadratic', MANIFOLD_STIEFEL, 10, 3)
        audit = taylor_audit(f, MANIFOLD_STIEFEL, 10, 3, trials=10, rng=np.random.default_rng(1))
        self.assertTrue(audit.passes)
        for trial in audit.trials:
            self.assertEqual(trial.first_status, STATUS_PASS)
            self.assertGreaterEqual(trial.first_slope, 1.9)
            self.assertGreaterEqual(trial.second_slope, 2.5)

    def test_linear_first_order_is_exact(self):
        f = _functional('linear', MANIFOLD_STIEFEL, 8, 2)
        audit = taylor_audit(f, MANIFOLD_STIEFEL, 8, 2, trials=5, rng=np.random.default_rng(2))
        self.assertTrue(audit.passes)
        self.assertTrue(all(trial.first_status == STATUS_DEGENERATE for trial in audit.trials))

    def test_grassmann_trace_is_constant(self):
        f = _functional('trace', MANIFOLD_GRASSMANN, 6, 2)
        audit = taylor_audit(f, MANIFOLD_GRASSMANN, 6, 2, trials=3, rng=np.random.default_rng(3))
        self.assertTrue(audit.passes)
        for trial in audit.trials:
            self.assertEqual((trial.first_status, trial.second_status), (STATUS_DEGENERATE, STATUS_DEGENERATE))

    def test_grassmann_congruence(self):
        f = _functional('congruence', MANIFOLD_GRASSMANN, 7, 3)
        audit = taylor_audit(f, MANIFOLD_GRASSMANN, 7, 3, trials=5, rng=np.random.default_rng(4))
        self.assertTrue(audit.passes)

    def test_step_ladder(self):
        steps = taylor_steps()
        self.assertEqual(len(steps), 7)
        self.assertAlmostEqual(steps[0], 1e-1)
        self.assertAlmostEqual(steps[-1], 1e-4)
        f = _functional('linear', MANIFOLD_STIEFEL, 5, 2)
        with self.assertRaises(PreconditionError):
            taylor_audit(f, MANIFOLD_STIEFEL, 5, 2, trials=1, rng=np.random.default_rng(0), steps=[1e-3, 1e-2, 1e-1])


class InequalityAuditTests(SimpleTestCase):

    def test_poincare(self):
        for name in ('linear', 'quadratic'):
            with self.subTest(functional=name):
                f = _functional(name, MANIFOLD_STIEFEL, 12, 3)
                audit = poincare_audit(f, MANIFOLD_STIEFEL, 12, 3, 4000, seed=1)
                self.assertTrue(audit.holds)
                self.assertGreater(audit.margin, 0.0)

    def test_poincare_on_grassmann(self):
        f = _functional('linear', MANIFOLD_GRASSMANN, 10, 3)
        self.assertTrue(poincare_audit(f, MANIFOLD_GRASSMANN, 10, 3, 2000, seed=2).holds)

    def test_log_sobolev(self):
        for name in ('linear', 'quadratic'):
            with self.subTest(functional=name):
                f = _functional(name, MANIFOLD_STIEFEL, 12, 3)
                audit = lsi_audit(f, MANIFOLD_STIEFEL, 12, 3, 4000, seed=3)
                self.assertTrue(audit.holds)
                self.assertGreaterEqual(audit.lhs, 0.0)

    def test_constant_has_no_entropy(self):
        f = _functional('constant', MANIFOLD_STIEFEL, 6, 2)
        audit = lsi_audit(f, MANIFOLD_STIEFEL, 6, 2, 1000, seed=0)
        self.assertAlmostEqual(audit.lhs, 0.0, places=12)
        self.assertTrue(audit.holds)

    def test_lp_growth(self):
        f = _functional('linear', MANIFOLD_STIEFEL, 12, 3)
        for gradient in ('intrinsic', GRADIENT_EUCLIDEAN):
            with self.subTest(gradient=gradient):
                audit = lp_growth_audit(f, MANIFOLD_STIEFEL, 12, 3, 4000, seed=5, gradient=gradient)
                self.assertTrue(audit.passes)
                self.assertEqual([row.p for row in audit.rows], [2.0, 3.0, 4.0, 6.0, 8.0])
                self.assertEqual(audit.rows[0].status, STATUS_DEGENERATE)

    def test_lp_growth_rejects_large_p(self):
        f = _functional('linear', MANIFOLD_STIEFEL, 12, 3)
        with self.assertRaises(PreconditionError):
            lp_growth_audit(f, MANIFOLD_STIEFEL, 12, 3, 1000, seed=5, p_grid=(2, 20))

    def test_exponential_moment(self):
        f = _functional('linear', MANIFOLD_STIEFEL, 12, 3)
        moment = exp_moment_audit(f, MANIFOLD_STIEFEL, 12, 3, 2000, seed=6)
        self.assertTrue(moment.holds)
        self.assertGreaterEqual(moment.estimate, 1.0)

    def test_first_to_second_needs_large_n(self):
        f = _functional('linear', MANIFOLD_STIEFEL, 10, 2)
        with self.assertRaises(ValidityError):
            first_to_second_audit(f, MANIFOLD_STIEFEL, 10, 2, 1000, seed=0)
