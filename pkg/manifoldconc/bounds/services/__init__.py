from .constants import TheoremConstant
from .curves import NormInput, TailBound, as_norm_input
from .exporters import export_curve_csv, format_number, provenance_header
from .inequalities import (
    ExpMoment,
    entropy_constant,
    exp_moment_lhs,
    first_to_second_constant,
    lp_growth_rhs,
    lsi_constant,
    poincare_constant,
)
from .tails import (
    HANSON_WRIGHT_NORMS,
    centered_gradient_factor,
    dist_subspace_tail,
    grassmann_dist_tail,
    hanson_wright_tail,
    hanson_wright_validity,
    kth_order_tail,
    linear_form_tail,
    lipschitz_tail,
    norm_conc_tail,
    second_order_tail,
    second_order_tail_centered_grad,
)

__all__ = [
    'ExpMoment',
    'HANSON_WRIGHT_NORMS',
    'NormInput',
    'TailBound',
    'TheoremConstant',
    'as_norm_input',
    'centered_gradient_factor',
    'dist_subspace_tail',
    'entropy_constant',
    'exp_moment_lhs',
    'export_curve_csv',
    'first_to_second_constant',
    'format_number',
    'grassmann_dist_tail',
    'hanson_wright_tail',
    'hanson_wright_validity',
    'kth_order_tail',
    'linear_form_tail',
    'lipschitz_tail',
    'lp_growth_rhs',
    'lsi_constant',
    'norm_conc_tail',
    'poincare_constant',
    'provenance_header',
    'second_order_tail',
    'second_order_tail_centered_grad',
]
