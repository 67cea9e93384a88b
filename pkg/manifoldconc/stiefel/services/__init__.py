from .calculus import (
    BRANCH_GRADIENT,
    BRANCH_OPERATOR,
    SecondOrderModulus,
    correction_matrix,
    hessian_vector_via_identity,
    intrinsic_gradient,
    intrinsic_hessian_apply,
    intrinsic_hessian_matrix,
    intrinsic_hessian_operator,
    intrinsic_hessian_opnorm,
    second_order_modulus,
    second_order_modulus_fd,
    tangent_projector_matrix,
)
from .points import (
    StiefelPoint,
    TangentVector,
    as_point,
    inverse_sqrt,
    project_tangent_array,
    random_tangent,
    retract,
    sample_uniform,
    sample_uniform_batch,
    tangent_project,
)
from .smooth import (
    PROVENANCE_ANALYTIC,
    PROVENANCE_FINITE_DIFFERENCE,
    SmoothFunctional,
    fd_gradient,
    fd_hessian,
    fd_jacobian,
)

__all__ = [
    'BRANCH_GRADIENT',
    'BRANCH_OPERATOR',
    'PROVENANCE_ANALYTIC',
    'PROVENANCE_FINITE_DIFFERENCE',
    'SecondOrderModulus',
    'SmoothFunctional',
    'StiefelPoint',
    'TangentVector',
    'as_point',
    'correction_matrix',
    'fd_gradient',
    'fd_hessian',
    'fd_jacobian',
    'hessian_vector_via_identity',
    'intrinsic_gradient',
    'intrinsic_hessian_apply',
    'intrinsic_hessian_matrix',
    'intrinsic_hessian_operator',
    'intrinsic_hessian_opnorm',
    'inverse_sqrt',
    'project_tangent_array',
    'random_tangent',
    'retract',
    'sample_uniform',
    'sample_uniform_batch',
    'second_order_modulus',
    'second_order_modulus_fd',
    'tangent_project',
]
