import numpy as np

from django.test import SimpleTestCase
from scipy.optimize import minimize

from core.exceptions import DimensionMismatchError
from matcalc.services import DenseTensor, commutator, hs_norm, op_norm, sym_product, symmetrize_tensor


class SymProductTests(SimpleTestCase):

    def test_orthonormal_frame_gives_identity(self):
        A, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((6, 3)))
        np.testing.assert_allclose(sym_product(A, A), np.eye(3), atol=1e-14)

    def test_reduces_to_scalar_product_for_vectors(self):
        self.assertEqual(sym_product([[1.0], [0.0]], [[0.0], [1.0]])[0, 0], 0.0)
        self.assertAlmostEqual(sym_product([[1.0], [2.0]], [[3.0], [4.0]])[0, 0], 11.0)

    def test_output_symmetric(self):
        rng = np.random.default_rng(1)
        M, N = rng.standard_normal((7, 3)), rng.standard_normal((7, 3))
        S = sym_product(M, N)
        np.testing.assert_array_equal(S, S.T)

    def test_shape_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            sym_product(np.ones((3, 2)), np.ones((3, 3)))


class CommutatorTests(SimpleTestCase):

    def test_identity_commutes(self):
        N = np.random.default_rng(2).standard_normal((4, 4))
        np.testing.assert_array_equal(commutator(np.eye(4), N), np.zeros((4, 4)))

    def test_antisymmetry(self):
        rng = np.random.default_rng(3)
        M, N = rng.standard_normal((5, 5)), rng.standard_normal((5, 5))
        np.testing.assert_allclose(commutator(M, N), -commutator(N, M), atol=1e-14)
        np.testing.assert_array_equal(commutator(M, M), np.zeros((5, 5)))

    def test_double_commutator_with_projection_is_symmetric(self):
        rng = np.random.default_rng(4)
        A, _ = np.linalg.qr(rng.standard_normal((6, 2)))
        P = A @ A.T
        M = rng.standard_normal((6, 6))
        M = M + M.T
        double = commutator(P, commutator(P, M))
        np.testing.assert_allclose(double, double.T, atol=1e-13)
        np.testing.assert_allclose(double, P @ M + M @ P - 2 * P @ M @ P, atol=1e-12)

    def test_rejects_non_square(self):
        with self.assertRaises(DimensionMismatchError):
            commutator(np.ones((2, 3)), np.ones((2, 3)))


class NormTests(SimpleTestCase):

    def test_hs_norm_examples(self):
        self.assertAlmostEqual(hs_norm(np.eye(5)), np.sqrt(5))
        self.assertEqual(hs_norm(np.zeros((2, 2, 2))), 0.0)
        T = np.random.default_rng(5).standard_normal((3, 4, 2))
        self.assertAlmostEqual(hs_norm(T) ** 2, float(np.sum(T ** 2)))

    def test_matrix_op_norm_is_exact(self):
        result = op_norm(np.diag([3.0, 1.0]))
        self.assertAlmostEqual(result.value, 3.0)
        self.assertTrue(result.exact)

    def test_rank_one_matrix_attains_hs_norm(self):
        rng = np.random.default_rng(6)
        x, y = rng.standard_normal(5), rng.standard_normal(3)
        result = op_norm(np.outer(x, y))
        self.assertAlmostEqual(result.value, np.linalg.norm(x) * np.linalg.norm(y))
        self.assertAlmostEqual(result.value, hs_norm(np.outer(x, y)))

    def test_op_norm_below_hs_norm(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            M = rng.standard_normal((4, 6))
            self.assertLess(op_norm(M).value, hs_norm(M))
        for _ in range(5):
            result = op_norm(rng.standard_normal((3, 3, 4)), restarts=3)
            self.assertLessEqual(result.value, result.upper)
            self.assertFalse(result.exact)

    def test_vector_op_norm_is_euclidean(self):
        self.assertAlmostEqual(op_norm(np.array([3.0, 4.0])).value, 5.0)

    def test_symmetric_order_three_matches_sphere_search(self):
        rng = np.random.default_rng(8)
        T = symmetrize_tensor(rng.standard_normal((3, 3, 3)))

        def cubic(x):
            x = x / np.linalg.norm(x)
            return -abs(float(np.einsum('ijk,i,j,k->', T, x, x, x)))

        # A symmetric form attains its norm on the diagonal x = y = z
        theta, phi = np.meshgrid(np.linspace(0, np.pi, 90), np.linspace(0, 2 * np.pi, 180))
        grid = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], -1).reshape(-1, 3)
        values = np.abs(np.einsum('ijk,ni,nj,nk->n', T, grid, grid, grid))
        starts = grid[np.argsort(values)[-5:]]
        oracle = max(-minimize(cubic, x0, method='Nelder-Mead', options={'xatol': 1e-10, 'fatol': 1e-12}).fun
                     for x0 in starts)

        result = op_norm(T)
        self.assertLess(abs(result.value - oracle), 1e-3)
        self.assertLessEqual(result.value, hs_norm(T))


class DenseTensorTests(SimpleTestCase):

    def test_symmetrized_flag_survives_spot_check(self):
        rng = np.random.default_rng(9)
        tensor = DenseTensor.symmetrized(rng.standard_normal((4, 4, 4)))
        self.assertTrue(tensor.symmetric)
        self.assertTrue(tensor.check_symmetry(rng, samples=20))
        self.assertFalse(DenseTensor(rng.standard_normal((4, 4, 4))).check_symmetry(rng, samples=20))

    def test_symmetrization_idempotent(self):
        T = symmetrize_tensor(np.random.default_rng(10).standard_normal((3, 3, 3, 3)))
        np.testing.assert_allclose(symmetrize_tensor(T), T, atol=1e-13)

    def test_rejects_non_finite(self):
        with self.assertRaises(ValueError):
            DenseTensor(np.array([1.0, np.nan]))

    def test_orders(self):
        tensor = DenseTensor(np.zeros((2, 3, 4)))
        self.assertEqual(tensor.order, 3)
        self.assertEqual(tensor.dims, (2, 3, 4))
