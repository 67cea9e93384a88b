"""
Plain-text matrix and tensor files.

Matrix files start with ``# rows=<n> cols=<m>`` followed by one CSV line per
row. Tensor files start with ``# order=<k> dims=<d1>x<d2>x...`` followed by the
entries in lexicographic index order, ``d_k`` values per line.
"""
import csv
import logging
import re
from pathlib import Path

import numpy as np

from .exceptions import MatrixFormatError

logger = logging.getLogger(__name__)

_MATRIX_HEADER = re.compile(r'^#\s*rows=(\d+)\s+cols=(\d+)\s*$')
_TENSOR_HEADER = re.compile(r'^#\s*order=(\d+)\s+dims=([\dx]+)\s*$')


def _format(value):
    return format(float(value), '.17g')


def _read_rows(path):
    path = Path(path)
    if not path.exists():
        raise MatrixFormatError(f'Matrix file not found: {path}')
    with path.open(newline='') as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise MatrixFormatError(f'Empty matrix file: {path}')
    body = [row for row in csv.reader(lines[1:]) if row]
    try:
        values = [[float(cell) for cell in row] for row in body]
    except ValueError as exc:
        raise MatrixFormatError(f'Non-numeric entry in {path}: {exc}') from exc
    return lines[0].strip(), values


def read_matrix(path):
    """Load an n×m matrix written by :func:`write_matrix`."""
    header, values = _read_rows(path)
    match = _MATRIX_HEADER.match(header)
    if not match:
        raise MatrixFormatError(f'Bad matrix header in {path}: {header!r}')
    rows, cols = int(match.group(1)), int(match.group(2))
    if len(values) != rows or any(len(row) != cols for row in values):
        raise MatrixFormatError(f'{path}: header says {rows}x{cols}, body does not match')
    matrix = np.asarray(values, dtype=float).reshape(rows, cols)
    if not np.all(np.isfinite(matrix)):
        raise MatrixFormatError(f'{path}: non-finite entries')
    logger.debug('Loaded %dx%d matrix from %s', rows, cols, path)
    return matrix


def write_matrix(path, matrix):
    """Write a 2-D array with full double precision."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as handle:
        handle.write(f'# rows={matrix.shape[0]} cols={matrix.shape[1]}\n')
        writer = csv.writer(handle, lineterminator='\n')
        for row in matrix:
            writer.writerow([_format(x) for x in row])
    return path


def read_tensor(path):
    """Load a dense tensor written by :func:`write_tensor`."""
    header, values = _read_rows(path)
    match = _TENSOR_HEADER.match(header)
    if not match:
        raise MatrixFormatError(f'Bad tensor header in {path}: {header!r}')
    order = int(match.group(1))
    dims = tuple(int(x) for x in match.group(2).split('x') if x)
    if len(dims) != order:
        raise MatrixFormatError(f'{path}: order={order} but {len(dims)} dims given')
    flat = np.asarray([x for row in values for x in row], dtype=float)
    if flat.size != int(np.prod(dims)):
        raise MatrixFormatError(f'{path}: expected {int(np.prod(dims))} entries, found {flat.size}')
    if not np.all(np.isfinite(flat)):
        raise MatrixFormatError(f'{path}: non-finite entries')
    logger.debug('Loaded order-%d tensor %s from %s', order, dims, path)
    return flat.reshape(dims)


def write_tensor(path, tensor):
    tensor = np.asarray(tensor, dtype=float)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dims = 'x'.join(str(x) for x in tensor.shape)
    rows = tensor.reshape(-1, tensor.shape[-1])
    with path.open('w', newline='') as handle:
        handle.write(f'# order={tensor.ndim} dims={dims}\n')
        writer = csv.writer(handle, lineterminator='\n')
        for row in rows:
            writer.writerow([_format(x) for x in row])
    return path
