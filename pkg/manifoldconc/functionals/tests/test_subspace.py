import numpy as np

from django.test import SimpleTestCase

from core.constants import SUBSPACE_COMPLEMENT, SUBSPACE_ONTO
from core.exceptions import DimensionMismatchError, NotOnManifoldError, PreconditionError
from functionals.services import (
    NormFunctional,
    dist_to_subspace,
    entry_moment_table,
    grassmann_dist_mean,
    grassmann_dist_sq,
    grassmann_dist_values,
    norm_functional,
    projection_onto,
    subspace_centering,
    subspace_operator,
)
from grassmann import services as grassmann
from matcalc.services import vec
from stiefel import services as stiefel


class DistToSubspaceTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(63)
        self.A = stiefel.sample_uniform(7, 3, self.rng)
        self.Q = self.A.A @ self.A.A.T

    def test_own_span(self):
        self.assertAlmostEqual(dist_to_subspace(self.A, self.Q, SUBSPACE_ONTO), np.sqrt(3.0), places=12)
        self.assertAlmostEqual(dist_to_subspace(self.A, self.Q, SUBSPACE_COMPLEMENT), 0.0, places=12)

    def test_basis_invariance(self):
        Q = projection_onto(self.rng.standard_normal((7, 2)))
        O, _ = np.linalg.qr(self.rng.standard_normal((3, 3)))
        for mode in (SUBSPACE_ONTO, SUBSPACE_COMPLEMENT):
            rotated = dist_to_subspace(self.A.A @ O, Q, mode)
            self.assertAlmostEqual(rotated, dist_to_subspace(self.A, Q, mode), delta=1e-12)

    def test_operator_norms(self):
        Q = projection_onto(self.rng.standard_normal((7, 2)))
        for mode, rank in ((SUBSPACE_ONTO, 2), (SUBSPACE_COMPLEMENT, 5)):
            M = subspace_operator(Q, 3, mode)
            self.assertAlmostEqual(float(np.sum(M * M)), 3.0 * rank, places=10)
            self.assertAlmostEqual(float(np.linalg.norm(M, 2)), 1.0, places=10)

    def test_matches_operator_form(self):
        Q = projection_onto(self.rng.standard_normal((7, 4)))
        M = subspace_operator(Q, 3, SUBSPACE_COMPLEMENT)
        self.assertAlmostEqual(
            dist_to_subspace(self.A, Q, SUBSPACE_COMPLEMENT), float(np.linalg.norm(M @ vec(self.A.A))), places=12
        )

    def test_rejects_non_projections(self):
        with self.assertRaises(NotOnManifoldError):
            dist_to_subspace(self.A, 0.5 * np.eye(7))
        with self.assertRaises(PreconditionError):
            dist_to_subspace(self.A, self.Q, 'sideways')

    def test_projection_tolerance(self):
        perturbed = self.Q + 1e-10 * np.eye(7)
        self.assertAlmostEqual(dist_to_subspace(self.A, perturbed), np.sqrt(3.0), places=8)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            dist_to_subspace(self.A, np.eye(5))


class NormFunctionalTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(64)

    def test_identity_operator(self):
        for _ in range(5):
            A = stiefel.sample_uniform(6, 2, self.rng)
            result = norm_functional(np.eye(12), A)
            self.assertAlmostEqual(result.value, np.sqrt(2.0), places=12)
            self.assertAlmostEqual(result.centering, np.sqrt(2.0), places=12)

    def test_subspace_construction_agrees(self):
        Q = projection_onto(self.rng.standard_normal((6, 3)))
        functional = NormFunctional.for_subspace(Q, 2)
        A = stiefel.sample_uniform(6, 2, self.rng)
        self.assertAlmostEqual(functional(A), dist_to_subspace(A, Q), places=12)
        self.assertAlmostEqual(functional.centering, subspace_centering(6, 2, 3), places=12)
        self.assertAlmostEqual(functional.op_norm, 1.0, places=10)

    def test_rank_one_operator(self):
        u, v = self.rng.standard_normal(12), self.rng.standard_normal(12)
        A = stiefel.sample_uniform(6, 2, self.rng)
        expected = abs(float(v @ vec(A.A))) * float(np.linalg.norm(u))
        self.assertAlmostEqual(norm_functional(np.outer(u, v), A).value, expected, delta=1e-12 * max(1.0, expected))

    def test_batch_values(self):
        functional = NormFunctional(self.rng.standard_normal((5, 12)), 6, 2)
        batch = stiefel.sample_uniform_batch(6, 2, 10, self.rng)
        np.testing.assert_allclose(functional.values(batch), [functional(X) for X in batch], atol=1e-12)

    def test_centering_of_onto_and_complement(self):
        self.assertAlmostEqual(subspace_centering(50, 3, 3), 3 / np.sqrt(50), places=14)
        self.assertAlmostEqual(subspace_centering(50, 3, 3, SUBSPACE_COMPLEMENT), np.sqrt(3 * 47 / 50), places=14)
        self.assertAlmostEqual(subspace_centering(50, 3, 5), np.sqrt(15 / 50), places=14)


class GrassmannDistanceTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(65)

    def test_same_point(self):
        P = grassmann.sample_uniform(6, 2, self.rng)
        self.assertAlmostEqual(grassmann_dist_sq(P, P), 0.0, places=12)

    def test_orthogonal_ranges(self):
        P = np.diag([1.0, 1.0, 0.0, 0.0, 0.0])
        P_F = np.diag([0.0, 0.0, 1.0, 1.0, 0.0])
        self.assertEqual(grassmann_dist_sq(P, P_F), 4.0)

    def test_identity_with_squared_norm(self):
        for _ in range(50):
            P, P_F = grassmann.sample_uniform(8, 3, self.rng), grassmann.sample_uniform(8, 3, self.rng)
            self.assertAlmostEqual(grassmann_dist_sq(P, P_F), float(np.sum((P.P - P_F.P) ** 2)), delta=1e-12)

    def test_batch_values(self):
        P_F = grassmann.sample_uniform(8, 3, self.rng)
        batch = grassmann.sample_uniform_batch(8, 3, 10, self.rng)
        np.testing.assert_allclose(grassmann_dist_values(P_F, batch), [grassmann_dist_sq(P, P_F) for P in batch],
                                   atol=1e-12)

    def test_mean(self):
        self.assertAlmostEqual(grassmann_dist_mean(40, 2), 3.8, places=14)

    def test_rank_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            grassmann_dist_sq(np.diag([1.0, 0.0, 0.0]), np.diag([1.0, 1.0, 0.0]))


class EntryMomentTests(SimpleTestCase):

    def test_table_values(self):
        table = entry_moment_table(8, 2)
        self.assertEqual(table.second((0, 0), (0, 0)), 0.125)
        self.assertEqual(table.second((0, 0), (0, 1)), 0.0)
        self.assertEqual(table.projection(0, 0), 0.25)
        self.assertEqual(table.projection(0, 1), 0.0)
        self.assertEqual(table.first((3, 1)), 0.0)
        self.assertEqual(table.third((0, 0), (0, 0), (1, 1)), 0.0)

    def test_squared_norm_is_d_for_every_sample(self):
        batch = stiefel.sample_uniform_batch(8, 2, 1000, np.random.default_rng(66))
        np.testing.assert_allclose(np.sum(batch ** 2, axis=(1, 2)), entry_moment_table(8, 2).squared_norm, atol=1e-12)

    def test_invalid_dimensions(self):
        with self.assertRaises(DimensionMismatchError):
            entry_moment_table(3, 4)
