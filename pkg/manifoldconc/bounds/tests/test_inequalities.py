import math
import tempfile
from pathlib import Path

import numpy as np

from django.test import SimpleTestCase

from bounds.services import (
    entropy_constant,
    exp_moment_lhs,
    export_curve_csv,
    first_to_second_constant,
    lp_growth_rhs,
    lsi_constant,
    poincare_constant,
    second_order_tail,
)
from core.constants import MANIFOLD_GRASSMANN
from core.exceptions import PreconditionError, ValidityError
from stiefel import services as stiefel


class LogSobolevTests(SimpleTestCase):

    def test_constants(self):
        self.assertEqual(lsi_constant(10), 0.5)
        self.assertEqual(lsi_constant(10, MANIFOLD_GRASSMANN), 1.0)
        self.assertEqual(entropy_constant(10), 1.0)
        self.assertEqual(poincare_constant(30, d=2), 4 / 28)

    def test_square_stiefel_rejected(self):
        with self.assertRaises(PreconditionError):
            lsi_constant(5, d=5)
        with self.assertRaises(ValidityError):
            lsi_constant(2)


class LpGrowthTests(SimpleTestCase):

    def test_p_two_is_the_l2_norm(self):
        self.assertAlmostEqual(lp_growth_rhs(2, 30, 0.7, 5.0), 0.7, places=15)

    def test_square_is_linear_in_p(self):
        values = [lp_growth_rhs(p, 30, 0.7, 0.4) ** 2 for p in (2, 4, 6)]
        self.assertAlmostEqual(values[1] - values[0], values[2] - values[1], places=14)
        self.assertAlmostEqual(values[1] - values[0], 2 * 4 / 28 * 0.16, places=14)

    def test_grassmann_factor(self):
        self.assertAlmostEqual(lp_growth_rhs(4, 30, 0.0, 1.0, MANIFOLD_GRASSMANN), math.sqrt(16 / 28), places=14)

    def test_p_below_two(self):
        with self.assertRaises(PreconditionError):
            lp_growth_rhs(1.5, 30, 1.0, 1.0)


class FirstToSecondTests(SimpleTestCase):

    def test_constants(self):
        self.assertEqual(first_to_second_constant(100, 2), 8 / 82)
        self.assertEqual(first_to_second_constant(100, 2, MANIFOLD_GRASSMANN), 16 / 66)

    def test_undefined(self):
        with self.assertRaises(ValidityError):
            first_to_second_constant(18, 2)
        with self.assertRaises(ValidityError):
            first_to_second_constant(34, 2, MANIFOLD_GRASSMANN)


class ExpMomentTests(SimpleTestCase):

    def test_zero_functional(self):
        result = exp_moment_lhs(np.zeros(100), 30)
        self.assertEqual(result.estimate, 1.0)
        self.assertEqual(result.std_error, 0.0)

    def test_normalized_linear_form(self):
        n, d = 30, 2
        rng = np.random.default_rng(70)
        V = rng.standard_normal((n, d))
        V *= 2.0 / math.sqrt(n - 2) / np.linalg.norm(V)
        samples = np.einsum('nij,ij->n', stiefel.sample_uniform_batch(n, d, 20_000, rng), V)
        result = exp_moment_lhs(samples, n)
        self.assertTrue(result.holds)
        self.assertGreaterEqual(result.estimate, 1.0)

    def test_order_changes_the_power(self):
        samples = np.full(10, 4.0)
        second = exp_moment_lhs(samples, 30, k=2)
        fourth = exp_moment_lhs(samples, 30, k=4)
        scale = 28 / (32 * math.e)
        self.assertAlmostEqual(second.estimate, math.exp(scale * 4.0), places=12)
        self.assertAlmostEqual(fourth.estimate, math.exp(scale * 2.0), places=12)
        self.assertLess(exp_moment_lhs(samples, 30, manifold=MANIFOLD_GRASSMANN).estimate, second.estimate)


class CurveExportTests(SimpleTestCase):

    def test_csv_layout(self):
        bound = second_order_tail(30, 0.5, 0.5)
        with tempfile.TemporaryDirectory() as tmp:
            path = export_curve_csv(Path(tmp) / 'curve.csv', bound, np.linspace(0, 1, 5), manifest_hash='abc')
            lines = path.read_text().splitlines()
        self.assertEqual(lines[0], f'# manifest=abc provenance={bound.provenance}')
        self.assertEqual(lines[1], 't,bound')
        self.assertEqual(lines[2], '0,2')
        self.assertEqual(len(lines), 7)
