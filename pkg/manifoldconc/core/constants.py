"""Application-wide constants."""

# Manifold names
MANIFOLD_STIEFEL = 'stiefel'
MANIFOLD_GRASSMANN = 'grassmann'

ALL_MANIFOLDS = [MANIFOLD_STIEFEL, MANIFOLD_GRASSMANN]

# vec() stacks columns
VEC_ORDER = 'F'

# Manifold membership tolerances
ORTHONORMAL_TOL = 1e-10
REORTHONORMALIZE_TOL = 1e-6
TANGENT_TOL = 1e-10
GRASSMANN_SYMMETRY_TOL = 1e-10
GRASSMANN_IDEMPOTENCE_TOL = 1e-9
GRASSMANN_TRACE_TOL = 1e-8
GRASSMANN_TANGENT_TOL = 1e-9
PROJECTION_TOL = 1e-8
SYMMETRY_TOL = 1e-10

# Samplers and retractions
EIGENVALUE_FLOOR = 1e-12
SAMPLER_MAX_RETRIES = 100

# Test functionals
QUADRATIC_SYMMETRY_TOL = 1e-12
SUBSPACE_ONTO = 'onto'
SUBSPACE_COMPLEMENT = 'complement'

ALL_SUBSPACE_MODES = [SUBSPACE_ONTO, SUBSPACE_COMPLEMENT]

# Calculus
GRADIENT_ZERO_THRESHOLD = 1e-9
FD_STEP = 1e-5
# Second differences of a value evaluator need a larger step than first differences
FD_HESSIAN_STEP = 1e-4
# Dense intrinsic Hessians up to this dimension, matrix-free eigsh above it
DENSE_HESSIAN_MAX_DIM = 400

# Tensor operator norm (k >= 3)
OPNORM_RESTARTS = 20
OPNORM_MAX_ITER = 200
OPNORM_TOL = 1e-10

# Monte Carlo
MIN_SAMPLES = 1000
DEFAULT_CHUNK_SIZE = 4096
DEFAULT_PREPASS_SAMPLES = 2000
CP_CONFIDENCE = 0.99
SIGMA_LEVEL = 3.0
TAYLOR_STEPS = (1e-1, 1e-4, 7)
TAYLOR_FIRST_ORDER_SLOPE = 1.9
TAYLOR_SECOND_ORDER_SLOPE = 2.5
ENTROPY_CLAMP = 1e-300
# Derived t-grids stop where the bound falls to this level
AUTO_GRID_FLOOR = 1e-4
AUTO_GRID_POINTS = 100
FAULT_DIVISORS = (10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)
BONFERRONI_ALPHA = 0.0027
LP_GRID = (2, 3, 4, 6, 8)
LP_MAX_P = 16

# Counter-based substream ids (SeedSequence spawn_key prefixes)
STREAM_SAMPLES = 0
STREAM_PREPASS = 1
STREAM_PROBLEM = 2
STREAM_AUDIT_INDEX = 3

# CLI exit codes
EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG_ERROR = 2

# Norm input provenance kinds
NORM_EXACT = 'exact'
NORM_MC = 'mc-estimated'
NORM_BRACKETED = 'bracketed'
NORM_EMPIRICAL_MAX = 'empirical-max'

ALL_NORM_KINDS = [NORM_EXACT, NORM_MC, NORM_BRACKETED, NORM_EMPIRICAL_MAX]
