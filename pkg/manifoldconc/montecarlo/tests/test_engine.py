import numpy as np

from django.test import SimpleTestCase

from core.constants import MANIFOLD_GRASSMANN, MANIFOLD_STIEFEL, STREAM_PREPASS, STREAM_SAMPLES
from core.exceptions import ConfigError
from montecarlo.services import (
    ExperimentConfig,
    chunks,
    linear_grid,
    map_chunks,
    map_samples,
    require_seed,
    resolve_threads,
    sample_points,
    substream,
)


class SubstreamTests(SimpleTestCase):

    def test_same_key_same_draws(self):
        first = substream(7, STREAM_SAMPLES, 3).standard_normal(5)
        second = substream(7, STREAM_SAMPLES, 3).standard_normal(5)
        np.testing.assert_array_equal(first, second)

    def test_streams_and_chunks_differ(self):
        base = substream(7, STREAM_SAMPLES, 0).standard_normal(5)
        self.assertFalse(np.allclose(base, substream(7, STREAM_SAMPLES, 1).standard_normal(5)))
        self.assertFalse(np.allclose(base, substream(7, STREAM_PREPASS, 0).standard_normal(5)))
        self.assertFalse(np.allclose(base, substream(8, STREAM_SAMPLES, 0).standard_normal(5)))

    def test_seed_is_mandatory(self):
        for seed in (None, -1, True, 1.5, '3'):
            with self.assertRaises(ConfigError):
                require_seed(seed)
        self.assertEqual(require_seed(np.int64(4)), 4)


class ChunkTests(SimpleTestCase):

    def test_plan_covers_every_index_once(self):
        plan = chunks(10, 4)
        self.assertEqual([chunk.size for chunk in plan], [4, 4, 2])
        self.assertEqual([chunk.start for chunk in plan], [0, 4, 8])
        self.assertEqual(plan[-1].stop, 10)
        self.assertEqual([chunk.index for chunk in plan], [0, 1, 2])

    def test_bad_chunk_size(self):
        with self.assertRaises(ConfigError):
            chunks(10, 0)

    def test_threads(self):
        self.assertEqual(resolve_threads(3), 3)
        self.assertGreaterEqual(resolve_threads(None), 1)
        with self.assertRaises(ConfigError):
            resolve_threads(0)


class MapTests(SimpleTestCase):

    def test_results_do_not_depend_on_thread_count(self):
        def worker(chunk, rng):
            return chunk.index, rng.standard_normal(3)

        serial = map_chunks(worker, 50, 11, STREAM_SAMPLES, chunk_size=8, threads=1)
        threaded = map_chunks(worker, 50, 11, STREAM_SAMPLES, chunk_size=8, threads=4)
        self.assertEqual([index for index, _ in serial], list(range(7)))
        for (i, a), (j, b) in zip(serial, threaded):
            self.assertEqual(i, j)
            np.testing.assert_array_equal(a, b)

    def test_samples_lie_on_the_manifold(self):
        def worker(chunk, batch, rng):
            return batch

        batches = map_samples(worker, MANIFOLD_STIEFEL, 6, 2, 30, 3, STREAM_SAMPLES, chunk_size=16)
        self.assertEqual([len(batch) for batch in batches], [16, 14])
        gram = np.swapaxes(batches[0], 1, 2) @ batches[0]
        np.testing.assert_allclose(gram, np.broadcast_to(np.eye(2), gram.shape), atol=1e-12)

    def test_sample_points_grassmann(self):
        P = sample_points(MANIFOLD_GRASSMANN, 5, 2, 4, seed=2)
        self.assertEqual(P.shape, (4, 5, 5))
        np.testing.assert_allclose(np.trace(P, axis1=1, axis2=2), 2.0, atol=1e-10)
        np.testing.assert_array_equal(P, sample_points(MANIFOLD_GRASSMANN, 5, 2, 4, seed=2))


class ExperimentConfigTests(SimpleTestCase):

    def _config(self, **changes):
        values = {'n': 10, 'd': 2, 'samples': 1000, 'seed': 1}
        values.update(changes)
        return ExperimentConfig(**values)

    def test_grid_is_normalized(self):
        cfg = self._config(grid=[0, 0.5, 1])
        self.assertEqual(cfg.grid, (0.0, 0.5, 1.0))
        self.assertEqual(cfg.as_dict()['grid'], [0.0, 0.5, 1.0])
        self.assertIsNone(self._config().as_dict()['grid'])

    def test_rejections(self):
        bad = [
            {'d': 11},
            {'d': 0},
            {'samples': 999},
            {'seed': None},
            {'manifold': 'sphere'},
            {'grid': [0.5, 0.5]},
            {'grid': [-1.0, 1.0]},
            {'grid': []},
            {'grid': [0.0, float('inf')]},
            {'chunk_size': 0},
            {'mode': 'sideways'},
            {'rank': 11},
        ]
        for changes in bad:
            with self.subTest(changes=changes), self.assertRaises(ConfigError):
                self._config(**changes)

    def test_replace_revalidates(self):
        cfg = self._config()
        self.assertEqual(cfg.replace(samples=2000).samples, 2000)
        with self.assertRaises(ConfigError):
            cfg.replace(samples=10)

    def test_linear_grid(self):
        grid = linear_grid(2.0, points=5)
        self.assertEqual(grid, (0.0, 0.5, 1.0, 1.5, 2.0))
        with self.assertRaises(ConfigError):
            linear_grid(0.0)
