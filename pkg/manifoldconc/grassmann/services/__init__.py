from .angles import (
    LipschitzAudit,
    lipschitz_audit,
    lipschitz_ratio,
    lipschitz_witness,
    principal_angles,
    projection_distance_sq,
    projection_product_spectrum,
)
from .calculus import (
    hessian_vector_via_identity,
    intrinsic_gradient,
    intrinsic_hessian_apply,
    intrinsic_hessian_matrix,
    intrinsic_hessian_operator,
    intrinsic_hessian_opnorm,
    second_order_modulus,
    second_order_modulus_fd,
)
from .points import (
    GrassmannPoint,
    GrassmannTangent,
    as_point,
    from_stiefel,
    lift,
    project_tangent_array,
    random_tangent,
    retract,
    sample_uniform,
    sample_uniform_batch,
    sym_project,
    tangent_project,
)

__all__ = [
    'GrassmannPoint',
    'GrassmannTangent',
    'LipschitzAudit',
    'as_point',
    'from_stiefel',
    'hessian_vector_via_identity',
    'intrinsic_gradient',
    'intrinsic_hessian_apply',
    'intrinsic_hessian_matrix',
    'intrinsic_hessian_operator',
    'intrinsic_hessian_opnorm',
    'lift',
    'lipschitz_audit',
    'lipschitz_ratio',
    'lipschitz_witness',
    'principal_angles',
    'project_tangent_array',
    'projection_distance_sq',
    'projection_product_spectrum',
    'random_tangent',
    'retract',
    'sample_uniform',
    'sample_uniform_batch',
    'second_order_modulus',
    'second_order_modulus_fd',
    'sym_project',
    'tangent_project',
]
