from .ambient import ambient_array, mat_rows, vec_rows
from .catalog import CATALOG, CatalogEntry, available, build_functional, congruence_form
from .chaos import ChaosCoefficients, ChaosEvaluation, chaos_derivative, chaos_values, eval_chaos, linear_form
from .chaos import as_functional as chaos_functional
from .loaders import load_chaos, load_quadratic_form, load_subspace
from .moments import EntryMoments, entry_moment_table
from .quadratic import (
    ProjectedTerms,
    QuadraticEvaluation,
    QuadraticForm,
    det_form_d2,
    projected_terms,
    quad_value_grad_hess,
    quadratic_values,
)
from .quadratic import as_functional as quadratic_functional
from .subspace import (
    NormEvaluation,
    NormFunctional,
    dist_to_subspace,
    grassmann_dist_mean,
    grassmann_dist_sq,
    grassmann_dist_values,
    norm_functional,
    projection_onto,
    projection_rank,
    subspace_centering,
    subspace_operator,
    validate_projection,
)

__all__ = [
    'CATALOG',
    'CatalogEntry',
    'ChaosCoefficients',
    'ChaosEvaluation',
    'EntryMoments',
    'NormEvaluation',
    'NormFunctional',
    'ProjectedTerms',
    'QuadraticEvaluation',
    'QuadraticForm',
    'ambient_array',
    'available',
    'build_functional',
    'chaos_derivative',
    'chaos_functional',
    'chaos_values',
    'congruence_form',
    'det_form_d2',
    'dist_to_subspace',
    'entry_moment_table',
    'eval_chaos',
    'grassmann_dist_mean',
    'grassmann_dist_sq',
    'grassmann_dist_values',
    'linear_form',
    'load_chaos',
    'load_quadratic_form',
    'load_subspace',
    'mat_rows',
    'norm_functional',
    'projected_terms',
    'projection_onto',
    'projection_rank',
    'quad_value_grad_hess',
    'quadratic_functional',
    'quadratic_values',
    'subspace_centering',
    'subspace_operator',
    'validate_projection',
    'vec_rows',
]
