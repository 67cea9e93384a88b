import json
import tempfile
from pathlib import Path

from django.test import SimpleTestCase, override_settings

from core.exceptions import ConfigError
from experiments.services import load_config_file, parse_grid, resolve
from experiments.services.options import experiment_config


class ParseGridTests(SimpleTestCase):

    def test_inclusive_lattice(self):
        self.assertEqual(parse_grid('0:1:0.25'), (0.0, 0.25, 0.5, 0.75, 1.0))
        self.assertEqual(parse_grid('0:0.3:0.1'), (0.0, 0.1, 0.2, 0.3))
        self.assertEqual(parse_grid('0.5:0.5:1'), (0.5,))

    def test_stop_off_the_lattice(self):
        self.assertEqual(parse_grid('0:1:0.4'), (0.0, 0.4, 0.8))

    def test_lists_pass_through(self):
        self.assertEqual(parse_grid([0, 0.5]), (0.0, 0.5))

    def test_rejections(self):
        for text in ('0:1', '0:1:0', '1:0:0.1', 'a:b:c', '0:inf:1', '0:1:-0.1'):
            with self.subTest(text=text), self.assertRaises(ConfigError):
                parse_grid(text)


class ConfigFileTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, content, name='config.json'):
        path = self.dir / name
        path.write_text(content if isinstance(content, str) else json.dumps(content))
        return path

    def test_dashes_become_underscores(self):
        path = self._write({'chunk-size': 256, 'n': 12})
        self.assertEqual(load_config_file(path), {'chunk_size': 256, 'n': 12})

    def test_rejections(self):
        cases = [self._write('{not json', 'bad.json'), self._write([1, 2], 'list.json'),
                 self._write({'n': {'value': 3}}, 'nested.json'), self.dir / 'missing.json']
        for path in cases:
            with self.subTest(path=path.name), self.assertRaises(ConfigError):
                load_config_file(path)

    @override_settings(MANIFOLDCONC_CHUNK_SIZE=512, MANIFOLDCONC_THREADS=None)
    def test_layer_precedence(self):
        known = {'chunk_size', 'threads', 'n', 'seed'}
        self.assertEqual(resolve({}, known)['chunk_size'], 512)
        self.assertIsNone(resolve({}, known)['threads'])
        path = self._write({'chunk_size': 256, 'n': 12})
        from_file = resolve({'chunk_size': None}, known, config_path=path)
        self.assertEqual((from_file['chunk_size'], from_file['n']), (256, 12))
        flagged = resolve({'chunk_size': 128, 'seed': 3}, known, config_path=path)
        self.assertEqual((flagged['chunk_size'], flagged['n'], flagged['seed']), (128, 12, 3))

    def test_unknown_keys_in_file(self):
        path = self._write({'samplez': 1000})
        with self.assertRaises(ConfigError):
            resolve({}, {'samples'}, config_path=path)

    def test_grid_is_expanded(self):
        self.assertEqual(resolve({'grid': '0:0.2:0.1'}, {'grid'})['grid'], (0.0, 0.1, 0.2))


class ExperimentConfigTests(SimpleTestCase):

    def test_missing_seed(self):
        with self.assertRaisesRegex(ConfigError, '--seed'):
            experiment_config({'n': 10, 'd': 2, 'samples': 1000, 'seed': None})

    def test_unrelated_keys_are_ignored(self):
        cfg = experiment_config({'n': 10, 'd': 2, 'samples': 1000, 'seed': 4, 'out': 'runs', 'threads': 2})
        self.assertEqual((cfg.n, cfg.seed), (10, 4))
