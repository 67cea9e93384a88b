from .audits import (
    GRADIENT_EUCLIDEAN,
    GRADIENT_INTRINSIC,
    STATUS_DEGENERATE,
    STATUS_FAIL,
    STATUS_PASS,
    InequalityAudit,
    LpGrowthAudit,
    LpGrowthRow,
    MomentAudit,
    MomentRow,
    TaylorAudit,
    TaylorTrial,
    bonferroni_critical,
    exp_moment_audit,
    first_to_second_audit,
    lp_growth_audit,
    lsi_audit,
    moment_audit,
    poincare_audit,
    sample_points,
    taylor_audit,
    taylor_steps,
)
from .config import ExperimentConfig, linear_grid
from .engine import map_chunks, map_samples, resolve_threads, sample_batch
from .experiments import ALL_BOUNDS, BOUND_MANIFOLDS, Experiment, build_experiment, manifold_for
from .exporters import (
    export_inequality_csv,
    export_lp_growth_csv,
    export_moments_csv,
    export_report_csv,
    export_report_json,
    export_table_csv,
    export_taylor_csv,
    report_summary,
)
from .rng import Chunk, chunks, require_seed, substream
from .tails import (
    FaultInjection,
    TailReport,
    Verdict,
    auto_grid,
    clopper_pearson_upper,
    dominates,
    empirical_tail,
    evaluate_batch,
    fault_injection,
    survival_counts,
    tally_tail,
)

__all__ = [
    'ALL_BOUNDS',
    'BOUND_MANIFOLDS',
    'Chunk',
    'Experiment',
    'ExperimentConfig',
    'FaultInjection',
    'GRADIENT_EUCLIDEAN',
    'GRADIENT_INTRINSIC',
    'InequalityAudit',
    'LpGrowthAudit',
    'LpGrowthRow',
    'MomentAudit',
    'MomentRow',
    'STATUS_DEGENERATE',
    'STATUS_FAIL',
    'STATUS_PASS',
    'TailReport',
    'TaylorAudit',
    'TaylorTrial',
    'Verdict',
    'auto_grid',
    'bonferroni_critical',
    'build_experiment',
    'chunks',
    'clopper_pearson_upper',
    'dominates',
    'empirical_tail',
    'evaluate_batch',
    'exp_moment_audit',
    'export_inequality_csv',
    'export_lp_growth_csv',
    'export_moments_csv',
    'export_report_csv',
    'export_report_json',
    'export_table_csv',
    'export_taylor_csv',
    'fault_injection',
    'first_to_second_audit',
    'linear_grid',
    'lp_growth_audit',
    'lsi_audit',
    'manifold_for',
    'map_chunks',
    'map_samples',
    'moment_audit',
    'poincare_audit',
    'report_summary',
    'require_seed',
    'resolve_threads',
    'sample_batch',
    'sample_points',
    'substream',
    'survival_counts',
    'tally_tail',
    'taylor_audit',
    'taylor_steps',
]
