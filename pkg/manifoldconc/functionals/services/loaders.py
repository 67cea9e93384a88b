"""Load test-functional coefficients from matrix and tensor files."""
import logging

import numpy as np

from core.exceptions import ManifoldConcError, MatrixFormatError
from core.matrix_io import read_matrix, read_tensor

from .chaos import ChaosCoefficients
from .quadratic import QuadraticForm
from .subspace import projection_onto, validate_projection

logger = logging.getLogger(__name__)


def load_quadratic_form(path, n, d):
    M = read_matrix(path)
    try:
        form = QuadraticForm(M, n, d)
    except ManifoldConcError as exc:
        raise MatrixFormatError(f'{path}: {exc}') from exc
    logger.info('Loaded quadratic form on %dx%d matrices from %s', n, d, path)
    return form


def load_chaos(path, shape):
    entries = read_tensor(path)
    try:
        coefficients = ChaosCoefficients.from_entries(entries, shape)
    except ManifoldConcError as exc:
        raise MatrixFormatError(f'{path}: {exc}') from exc
    logger.info('Loaded order-%d chaos from %s', coefficients.order, path)
    return coefficients


def load_subspace(path, n):
    """A projection matrix, or the projection onto the span of an n×m basis."""
    F = read_matrix(path)
    if F.shape[0] != n:
        raise MatrixFormatError(f'{path}: subspace lives in R^{F.shape[0]}, expected R^{n}')
    try:
        if F.shape == (n, n) and np.allclose(F, F.T) and np.allclose(F @ F, F):
            return validate_projection(F)
        return projection_onto(F)
    except ManifoldConcError as exc:
        raise MatrixFormatError(f'{path}: {exc}') from exc
