"""q-th power Weber location solver with singularity handling."""

from ._qweber import (  # noqa: F401
    AmbiguousCoincidenceError,
    BacktrackCapError,
    EscapeResult,
    Event,
    IterationRecord,
    MinimumCertificate,
    SeriesMatrix,
    SingularEvaluationError,
    SolveResult,
    SolverConfig,
    Status,
    SweepCell,
    SweepReport,
    WeberInstance,
    coincidence_index,
    cost,
    descent_violation_index,
    desingularity_subgradient,
    finite_difference_gradient,
    gradient,
    l1_coincidence_step,
    load_series_csv,
    merge_duplicates,
    oracle_minimize,
    rate_estimate,
    rate_sequence,
    rolling_windows,
    run_sweep,
    solve_qpwa,
    solve_qpwaws,
    subgradient_certificate,
    sweep_report_to_json,
    synth_generate,
    t1_step,
    t2_escape,
    theoretical_rate_at_data_point,
)

__all__ = [name for name in dir() if not name.startswith("_")]
