"""Close a race-time deficit with per-kilometer savings plans.

The package turns recorded marathon splits and altitude data into a
box-constrained constraint-satisfaction problem (how much time to save on
each kilometer so the total equals the deficit exactly) and searches it with
seeded differential evolution, archiving every feasible plan it finds.
"""

from .de_engine import (
    CandidateVector,
    FeasibleArchive,
    RunResult,
    SolverConfig,
    TerminationReason,
    crossover,
    initialize_population,
    mutate,
    run,
    run_report_record,
    select,
    strategy_name,
)
from .deficit_problem import (
    DeficitProblem,
    FitnessValue,
    SavingsPlan,
    apply_plan,
    capacities_from_classes,
    check_solvable,
    fitness,
    map_decision,
    parse_bounds_csv,
    plan_record,
    problem_from_splits,
    solvability_message,
    total_time,
)
from .errors import (
    BackendError,
    ConfigError,
    DeficitError,
    InputFormatError,
    ProblemError,
    TrackError,
    UnsolvableError,
)
from .reporting import (
    BoundsFile,
    DeriveFromAltitude,
    ExplicitDeficit,
    ReportFormat,
    ReportRow,
    RunRequest,
    TotalsTarget,
    build_problem,
    emit_plot_data,
    load_inputs,
    render_report,
)
from .track_ingest import (
    KmSplit,
    SegmentClass,
    TrackPoint,
    aggregate_track,
    classify_segment,
    format_duration,
    parse_duration,
    parse_splits_csv,
    parse_track_points,
)

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "BoundsFile",
    "CandidateVector",
    "ConfigError",
    "DeficitError",
    "DeficitProblem",
    "DeriveFromAltitude",
    "ExplicitDeficit",
    "FeasibleArchive",
    "FitnessValue",
    "InputFormatError",
    "KmSplit",
    "ProblemError",
    "ReportFormat",
    "ReportRow",
    "RunRequest",
    "RunResult",
    "SavingsPlan",
    "SegmentClass",
    "SolverConfig",
    "TerminationReason",
    "TotalsTarget",
    "TrackError",
    "TrackPoint",
    "UnsolvableError",
    "aggregate_track",
    "apply_plan",
    "build_problem",
    "capacities_from_classes",
    "check_solvable",
    "classify_segment",
    "crossover",
    "emit_plot_data",
    "fitness",
    "format_duration",
    "initialize_population",
    "load_inputs",
    "map_decision",
    "mutate",
    "parse_bounds_csv",
    "parse_duration",
    "parse_splits_csv",
    "parse_track_points",
    "plan_record",
    "problem_from_splits",
    "render_report",
    "run",
    "run_report_record",
    "select",
    "solvability_message",
    "strategy_name",
    "total_time",
]
