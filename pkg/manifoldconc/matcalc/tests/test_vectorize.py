import itertools

import numpy as np

from django.test import SimpleTestCase

from core.exceptions import DimensionMismatchError
from matcalc.services import commutation_matrix, kron, mat, vec

SHAPES = list(itertools.product(range(1, 6), repeat=2))


def _assert_close(testcase, actual, expected, rtol=1e-12):
    scale = max(1.0, float(np.max(np.abs(expected))))
    testcase.assertLessEqual(float(np.max(np.abs(actual - expected))), rtol * scale)


class VecMatTests(SimpleTestCase):

    def test_vec_stacks_columns(self):
        np.testing.assert_array_equal(vec([[1, 2], [3, 4]]), [1, 3, 2, 4])

    def test_vec_of_column_is_the_column(self):
        np.testing.assert_array_equal(vec(np.array([[5.0], [6.0], [7.0]])), [5, 6, 7])

    def test_mat_inverts_vec(self):
        rng = np.random.default_rng(3)
        for n, m in SHAPES:
            A = rng.standard_normal((n, m))
            np.testing.assert_array_equal(mat(vec(A), n, m), A)
            v = rng.standard_normal(n * m)
            np.testing.assert_array_equal(vec(mat(v, n, m)), v)

    def test_mat_example(self):
        np.testing.assert_array_equal(mat([1, 3, 2, 4], 2, 2), [[1, 2], [3, 4]])
        self.assertEqual(mat([1, 2, 3], 3, 1).shape, (3, 1))

    def test_mat_rejects_wrong_length(self):
        with self.assertRaises(DimensionMismatchError):
            mat(np.ones(5), 2, 3)


class CommutationMatrixTests(SimpleTestCase):

    def test_row_vector_case_is_identity(self):
        np.testing.assert_array_equal(commutation_matrix(1, 4).dense(), np.eye(4))

    def test_two_by_two_swaps_middle_positions(self):
        expected = np.eye(4)[[0, 2, 1, 3]]
        np.testing.assert_array_equal(commutation_matrix(2, 2).dense(), expected)

    def test_defining_identity_is_exact(self):
        rng = np.random.default_rng(11)
        for n, m in SHAPES:
            K = commutation_matrix(n, m)
            dense = K.dense()
            for _ in range(100):
                A = rng.standard_normal((n, m))
                np.testing.assert_array_equal(K @ vec(A), vec(A.T))
                np.testing.assert_array_equal(dense @ vec(A), vec(A.T))

    def test_is_a_permutation_with_transpose_k_mn(self):
        for n, m in SHAPES:
            dense = commutation_matrix(n, m).dense()
            np.testing.assert_array_equal(dense.sum(axis=0), 1)
            np.testing.assert_array_equal(dense.sum(axis=1), 1)
            np.testing.assert_array_equal(dense.T, commutation_matrix(m, n).dense())
            np.testing.assert_array_equal(commutation_matrix(n, m).T.dense(), dense.T)

    def test_right_multiplication_matches_dense(self):
        rng = np.random.default_rng(5)
        K = commutation_matrix(3, 4)
        X = rng.standard_normal((2, 12))
        np.testing.assert_array_equal(X @ K, X @ K.dense())


class KroneckerIdentityTests(SimpleTestCase):
    """Each clause runs on 100 random conformable instances per shape."""

    def setUp(self):
        self.rng = np.random.default_rng(2024)

    def _r(self, *shape):
        return self.rng.standard_normal(shape)

    def test_block_diagonal_example(self):
        B = self._r(2, 3)
        expected = np.block([[B, np.zeros((2, 3))], [np.zeros((2, 3)), B]])
        np.testing.assert_array_equal(kron(np.eye(2), B), expected)

    def test_bilinearity_and_associativity(self):
        for n, m in SHAPES:
            for _ in range(100):
                A, B, C = self._r(n, m), self._r(m, n), self._r(m, n)
                alpha = float(self.rng.standard_normal())
                _assert_close(self, kron(A, B + C), kron(A, B) + kron(A, C))
                _assert_close(self, kron(B + C, A), kron(B, A) + kron(C, A))
                _assert_close(self, kron(alpha * A, B), alpha * kron(A, B))
                _assert_close(self, kron(kron(A, B), C), kron(A, kron(B, C)))

    def test_transpose(self):
        for n, m in SHAPES:
            for _ in range(100):
                A, B = self._r(n, m), self._r(m, n)
                _assert_close(self, kron(A, B).T, kron(A.T, B.T))

    def test_inverse(self):
        for n, m in SHAPES:
            for _ in range(100):
                A = 4.0 * np.eye(n) + 0.2 * self._r(n, n)
                B = 4.0 * np.eye(m) + 0.2 * self._r(m, m)
                _assert_close(self, np.linalg.inv(kron(A, B)), kron(np.linalg.inv(A), np.linalg.inv(B)))

    def test_mixed_product(self):
        for n, m in SHAPES:
            for _ in range(100):
                A, C = self._r(n, m), self._r(m, n)
                B, D = self._r(m, n), self._r(n, m)
                _assert_close(self, kron(A, B) @ kron(C, D), kron(A @ C, B @ D))

    def test_vec_identities(self):
        for n, m in SHAPES:
            p = 1 + (n + m) % 4
            for _ in range(100):
                A, B, C = self._r(n, m), self._r(m, p), self._r(p, n)
                _assert_close(self, vec(A @ B), kron(np.eye(p), A) @ vec(B))
                _assert_close(self, vec(A @ B), kron(B.T, np.eye(n)) @ vec(A))
                _assert_close(self, vec(A @ B @ C), kron(C.T, A) @ vec(B))

    def test_commutation_conjugation_swaps_factors(self):
        for n, m in SHAPES:
            p, q = 1 + n % 3, 1 + m % 2
            K_left = commutation_matrix(p, n).dense()
            K_right = commutation_matrix(m, q).dense()
            for _ in range(100):
                A, B = self._r(n, m), self._r(p, q)
                _assert_close(self, K_left @ kron(A, B) @ K_right, kron(B, A))
