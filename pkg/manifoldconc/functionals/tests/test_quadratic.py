import numpy as np

from django.test import SimpleTestCase

from core.exceptions import DimensionMismatchError, PreconditionError
from functionals.services import (
    QuadraticForm,
    det_form_d2,
    projected_terms,
    quad_value_grad_hess,
    quadratic_functional,
)
from matcalc.services import vec
from stiefel import services as stiefel


class QuadraticFormTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(61)

    def test_symmetrized_on_construction(self):
        M = np.arange(16.0).reshape(4, 4)
        with self.assertLogs('functionals.services.quadratic', level='INFO'):
            form = QuadraticForm(M, 2, 2)
        np.testing.assert_array_equal(form.M, form.M.T)

    def test_shape_checked(self):
        with self.assertRaises(DimensionMismatchError):
            QuadraticForm(np.eye(5), 2, 2)
        with self.assertRaises(DimensionMismatchError):
            quad_value_grad_hess(QuadraticForm.identity(3, 2), np.eye(4)[:, :2])

    def test_identity_form_is_trivial(self):
        form = QuadraticForm.identity(7, 3)
        for _ in range(10):
            A = stiefel.sample_uniform(7, 3, self.rng)
            result = quad_value_grad_hess(form, A)
            self.assertAlmostEqual(result.value, 3.0, places=12)
            np.testing.assert_allclose(result.B, 0.0, atol=1e-13)
            terms = projected_terms(form, A)
            np.testing.assert_allclose(terms.PU, 0.0, atol=1e-13)
        self.assertEqual(form.trace_centering, 3.0)

    def test_intrinsic_objects_match_stiefel_calculus(self):
        for _ in range(10):
            form = QuadraticForm.random(5, 2, self.rng)
            A = stiefel.sample_uniform(5, 2, self.rng)
            f = quadratic_functional(form)
            terms = projected_terms(form, A)
            np.testing.assert_allclose(2.0 * terms.PU, stiefel.intrinsic_gradient(f, A).V, atol=1e-10)
            np.testing.assert_allclose(2.0 * terms.PBP, stiefel.intrinsic_hessian_matrix(f, A), atol=1e-10)

    def test_ones_form(self):
        form = QuadraticForm.ones(4, 2)
        A = stiefel.sample_uniform(4, 2, self.rng)
        self.assertAlmostEqual(quad_value_grad_hess(form, A).value, float(np.sum(A.A)) ** 2, places=12)

    def test_batch_evaluation(self):
        form = QuadraticForm.random(4, 3, self.rng)
        f = quadratic_functional(form)
        batch = stiefel.sample_uniform_batch(4, 3, 8, self.rng)
        np.testing.assert_allclose(f.values(batch), [f.value(X) for X in batch], atol=1e-12)
        np.testing.assert_allclose(f.gradients(batch), np.stack([f.gradient(X) for X in batch]), atol=1e-12)


class DeterminantFormTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(62)

    def test_point_against_itself(self):
        A = stiefel.sample_uniform(6, 2, self.rng)
        self.assertAlmostEqual(quad_value_grad_hess(det_form_d2(A.A), A).value, 1.0, places=12)

    def test_reproduces_the_determinant(self):
        for _ in range(1000):
            C = self.rng.standard_normal((6, 2))
            A = stiefel.sample_uniform(6, 2, self.rng)
            value = quad_value_grad_hess(det_form_d2(C), A).value
            self.assertAlmostEqual(value, np.linalg.det(A.A.T @ C), delta=1e-12)

    def test_identical_columns_give_zero_form(self):
        c = self.rng.standard_normal(5)
        form = det_form_d2(np.column_stack([c, c]))
        np.testing.assert_array_equal(form.M, np.zeros((10, 10)))
        self.assertEqual(float(vec(self.rng.standard_normal((5, 2))) @ form.M @ vec(np.ones((5, 2)))), 0.0)

    def test_requires_two_columns(self):
        with self.assertRaises(PreconditionError):
            det_form_d2(self.rng.standard_normal((5, 3)))
