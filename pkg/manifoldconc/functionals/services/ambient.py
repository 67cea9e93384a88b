"""Vec coordinates of single points and of sample batches."""
import numpy as np

from matcalc.services import as_matrix


def ambient_array(point):
    """The matrix behind a StiefelPoint, GrassmannPoint or plain array."""
    for attribute in ('A', 'P'):
        value = getattr(point, attribute, None)
        if isinstance(value, np.ndarray):
            return value
    return as_matrix(point, 'point')


def vec_rows(batch):
    """(N, n, d) samples to (N, nd) rows of column-stacked entries."""
    batch = np.asarray(batch, dtype=float)
    return np.swapaxes(batch, -1, -2).reshape(batch.shape[0], -1)


def mat_rows(rows, shape):
    n, d = shape
    return np.swapaxes(rows.reshape(rows.shape[0], d, n), -1, -2)
