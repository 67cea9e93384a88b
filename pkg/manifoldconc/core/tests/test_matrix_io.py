import tempfile
from pathlib import Path

import numpy as np

from django.test import SimpleTestCase

from core.exceptions import ConfigError, MatrixFormatError
from core.matrix_io import read_matrix, read_tensor, write_matrix, write_tensor


class MatrixFileTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, name, text):
        path = self.dir / name
        path.write_text(text)
        return path

    def test_reads_hand_written_file(self):
        path = self._write('m.csv', '# rows=2 cols=3\n1,2,3\n4,5,6.5\n')
        np.testing.assert_array_equal(read_matrix(path), [[1, 2, 3], [4, 5, 6.5]])

    def test_written_file_keeps_full_precision(self):
        M = np.random.default_rng(0).standard_normal((4, 3)) / 7.0
        path = write_matrix(self.dir / 'nested' / 'm.csv', M)
        self.assertTrue(path.read_text().startswith('# rows=4 cols=3\n'))
        np.testing.assert_array_equal(read_matrix(path), M)

    def test_missing_file(self):
        with self.assertRaises(MatrixFormatError):
            read_matrix(self.dir / 'absent.csv')

    def test_bad_header_and_shape(self):
        with self.assertRaises(MatrixFormatError):
            read_matrix(self._write('a.csv', '1,2\n3,4\n'))
        with self.assertRaises(MatrixFormatError):
            read_matrix(self._write('b.csv', '# rows=2 cols=2\n1,2\n3\n'))
        with self.assertRaises(MatrixFormatError):
            read_matrix(self._write('c.csv', '# rows=3 cols=2\n1,2\n3,4\n'))

    def test_non_numeric_and_non_finite(self):
        with self.assertRaises(MatrixFormatError):
            read_matrix(self._write('a.csv', '# rows=1 cols=2\n1,x\n'))
        with self.assertRaises(MatrixFormatError):
            read_matrix(self._write('b.csv', '# rows=1 cols=2\n1,nan\n'))

    def test_format_errors_are_config_errors(self):
        with self.assertRaises(ConfigError):
            read_matrix(self.dir / 'absent.csv')


class TensorFileTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_entries_in_lexicographic_order(self):
        path = self.dir / 't.csv'
        path.write_text('# order=3 dims=2x2x2\n0,1\n2,3\n4,5\n6,7\n')
        T = read_tensor(path)
        self.assertEqual(T.shape, (2, 2, 2))
        self.assertEqual(T[1, 0, 1], 5.0)
        self.assertEqual(T[0, 1, 0], 2.0)

    def test_written_tensor_reloads(self):
        T = np.random.default_rng(1).standard_normal((3, 2, 4))
        np.testing.assert_array_equal(read_tensor(write_tensor(self.dir / 't.csv', T)), T)

    def test_order_and_count_checks(self):
        path = self.dir / 'bad.csv'
        path.write_text('# order=2 dims=2x2x2\n0,1\n')
        with self.assertRaises(MatrixFormatError):
            read_tensor(path)
        path.write_text('# order=2 dims=2x2\n0,1\n2\n')
        with self.assertRaises(MatrixFormatError):
            read_tensor(path)
