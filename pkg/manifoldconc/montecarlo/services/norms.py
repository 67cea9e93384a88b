"""
Norm inputs estimated on an independent pre-pass.

L² norms come back as Monte Carlo estimates with a standard error; sup norms
as the empirical maximum over the pre-pass, which is not a certified bound.
"""
import logging

import numpy as np

from bounds.services import NormInput
from core.constants import DEFAULT_CHUNK_SIZE, MANIFOLD_GRASSMANN, STREAM_PREPASS
from functionals.services import projected_terms
from grassmann import services as grassmann
from stiefel import services as stiefel

from .engine import map_samples

logger = logging.getLogger(__name__)


def run_prepass(statistics, manifold, n, d, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=1):
    """Evaluate ``statistics(batch) -> {name: per-sample array}`` over the pre-pass stream."""

    def worker(chunk, batch, rng):
        return {name: np.asarray(values, dtype=float) for name, values in statistics(batch).items()}

    results = map_samples(worker, manifold, n, d, samples, seed, STREAM_PREPASS, chunk_size, threads)
    merged = {name: np.concatenate([result[name] for result in results]) for name in results[0]}
    logger.debug('Pre-pass of %d samples produced %s', samples, ', '.join(sorted(merged)))
    return merged


def l2_input(name, values):
    """(E g²)^{1/2} with a delta-method standard error."""
    squares = np.asarray(values, dtype=float) ** 2
    mean = float(np.mean(squares))
    se_mean = float(np.std(squares, ddof=1) / np.sqrt(squares.size))
    value = float(np.sqrt(mean))
    std_error = se_mean / (2.0 * value) if value > 0 else float(np.sqrt(se_mean))
    return NormInput.estimated(name, value, std_error)


def max_input(name, values):
    return NormInput.empirical_max(name, float(np.max(values)))


def mean_estimate(values):
    values = np.asarray(values, dtype=float)
    return float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(values.size))


def intrinsic_gradients(f, manifold, batch):
    """∇_W f or ∇_G f at every sample, stacked like the batch."""
    G = f.gradients(batch)
    if manifold == MANIFOLD_GRASSMANN:
        G = 0.5 * (G + np.swapaxes(G, -1, -2))
        W = grassmann.project_tangent_array(batch, G)
        return 0.5 * (W + np.swapaxes(W, -1, -2))
    return stiefel.project_tangent_array(batch, G)


def gradient_norms(f, manifold, batch):
    return np.linalg.norm(intrinsic_gradients(f, manifold, batch), axis=(1, 2))


def euclidean_gradient_norms(f, batch):
    return np.linalg.norm(f.gradients(batch), axis=(1, 2))


def hessian_opnorms(f, manifold, batch):
    """‖f''_W‖_op (or ‖f''_G‖_op) per sample."""
    calculus = grassmann if manifold == MANIFOLD_GRASSMANN else stiefel
    return np.array([calculus.intrinsic_hessian_opnorm(f, X) for X in batch])


def hessian_hs_norms(f, manifold, batch):
    calculus = grassmann if manifold == MANIFOLD_GRASSMANN else stiefel
    return np.array([np.linalg.norm(calculus.intrinsic_hessian_matrix(f, X)) for X in batch])


def hanson_wright_statistics(Q, batch):
    """‖π_A U‖_HS, ‖Π B Π‖_op and ‖Π B Π‖_HS per sample."""
    terms = [projected_terms(Q, A) for A in batch]
    return {
        'PU_hs': np.array([np.linalg.norm(term.PU) for term in terms]),
        'PBP_op': np.array([np.linalg.norm(term.PBP, 2) for term in terms]),
        'PBP_hs': np.array([np.linalg.norm(term.PBP) for term in terms]),
    }


def projected_direction_norms(V, batch):
    """‖π_A V‖_HS per Stiefel sample."""
    V = np.asarray(V, dtype=float)
    return np.linalg.norm(stiefel.project_tangent_array(batch, np.broadcast_to(V, batch.shape)), axis=(1, 2))
