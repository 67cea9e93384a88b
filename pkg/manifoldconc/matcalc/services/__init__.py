from .arrays import DenseTensor, as_matrix, symmetrize_tensor
from .norms import OperatorNorm, hs_norm, op_norm
from .products import commutator, sym_product
from .vectorize import CommutationMatrix, commutation_matrix, kron, mat, vec

__all__ = [
    'CommutationMatrix',
    'DenseTensor',
    'OperatorNorm',
    'as_matrix',
    'commutation_matrix',
    'commutator',
    'hs_norm',
    'kron',
    'mat',
    'op_norm',
    'sym_product',
    'symmetrize_tensor',
    'vec',
]
