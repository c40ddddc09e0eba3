"""Accessibility percolation on hypercubes and NK fitness landscapes.

The package estimates when a strictly-increasing-fitness path connects
two conditioned vertices of {0,1}^N, locates the finite-N transition
threshold, models the conditioned update-sequence measures behind the
second-moment route, and provides NK-landscape maximization with
branching-random-walk calibration.  A reproducible Monte Carlo harness
with counter-based random streams ties it together under the `apl` CLI.
"""

from .analytic import (
    PhaseConstants,
    SpacingQuery,
    critical_x,
    dirichlet_segment_moment,
    eval_f,
    first_moment_upper,
    g_profile,
    m_coefficient,
    m_series_sum,
    monotone_derivative_check,
    p_odd,
    path_open_probability,
    phase_constants,
    solve_x0,
    spacing_moment_bound,
    spacing_moment_exact,
)
from .harness import (
    ExperimentPlan,
    OracleCheck,
    OracleReport,
    SweepResult,
    SweepRow,
    emit,
    estimate_accessibility,
    parse_sweep,
    run_critical_window,
    run_oracle_validation,
    run_transition_sweep,
    wilson_ci,
)
from .hypercube import (
    AccessResult,
    FitnessField,
    VertexId,
    apply_sequence,
    count_accessible_paths,
    enumerate_sequences,
    is_accessible,
    sample_field,
)
from .nk import (
    Genotype,
    NKLandscape,
    WalkResult,
    adaptive_walk,
    block_brw_batch,
    block_brw_max,
    build_landscape,
    exhaustive_max,
    fitness_of,
    greedy_block_increments,
    greedy_block_max,
    local_statistic_T,
)
from .seqmeasure import (
    GoodnessConfig,
    HammingProfile,
    OccupancyVector,
    UpdateSequence,
    hamming_profile,
    interval_stats,
    is_good,
    pmf_F1,
    pmf_F2,
    pmf_mu_kn,
    sample_F1,
    sample_F2,
    sample_continuous,
    sample_mu_kn,
)

__version__ = "0.1.0"

__all__ = [
    "AccessResult",
    "ExperimentPlan",
    "FitnessField",
    "Genotype",
    "GoodnessConfig",
    "HammingProfile",
    "NKLandscape",
    "OccupancyVector",
    "OracleCheck",
    "OracleReport",
    "PhaseConstants",
    "SpacingQuery",
    "SweepResult",
    "SweepRow",
    "UpdateSequence",
    "VertexId",
    "WalkResult",
    "adaptive_walk",
    "apply_sequence",
    "block_brw_batch",
    "block_brw_max",
    "build_landscape",
    "count_accessible_paths",
    "critical_x",
    "dirichlet_segment_moment",
    "emit",
    "enumerate_sequences",
    "estimate_accessibility",
    "eval_f",
    "exhaustive_max",
    "first_moment_upper",
    "fitness_of",
    "g_profile",
    "greedy_block_increments",
    "greedy_block_max",
    "hamming_profile",
    "interval_stats",
    "is_accessible",
    "is_good",
    "local_statistic_T",
    "m_coefficient",
    "m_series_sum",
    "monotone_derivative_check",
    "p_odd",
    "parse_sweep",
    "path_open_probability",
    "phase_constants",
    "pmf_F1",
    "pmf_F2",
    "pmf_mu_kn",
    "run_critical_window",
    "run_oracle_validation",
    "run_transition_sweep",
    "sample_F1",
    "sample_F2",
    "sample_continuous",
    "sample_field",
    "sample_mu_kn",
    "solve_x0",
    "spacing_moment_bound",
    "spacing_moment_exact",
    "wilson_ci",
]
