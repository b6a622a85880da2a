"""Report assembly: problem building from a request, tables, plot data.

The table output follows the published six-column race-table layout: one row
per segment plus a Total row, paces in `MM:SS.d0` style, seconds columns
trimmed to drop a trailing `.0`. The JSON and CSV forms carry the same
values machine-readably, in deciseconds.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .de_engine import SolverConfig
from .deficit_problem import (
    DeficitProblem,
    SavingsPlan,
    apply_plan,
    check_solvable,
    fitness,
    parse_bounds_csv,
    plan_record,
    problem_from_splits,
    solvability_message,
    total_time,
)
from .errors import InputFormatError, ProblemError, UnsolvableError
from .track_ingest import KmSplit, format_duration, parse_splits_csv


class ReportFormat(enum.Enum):
    Table = "table"
    Json = "json"
    Csv = "csv"


@dataclass(frozen=True)
class BoundsFile:
    """Capacities come from a bounds CSV."""

    path: str


@dataclass(frozen=True)
class DeriveFromAltitude:
    """Capacities come from gradient-classifying the splits."""


BoundsSource = BoundsFile | DeriveFromAltitude


@dataclass(frozen=True)
class ExplicitDeficit:
    """Target given directly in deciseconds."""

    deficit_ds: int


@dataclass(frozen=True)
class TotalsTarget:
    """Target as achieved-minus-goal finish times.

    With `round_up_to_second`, the difference is ceiled to a whole second
    (the rounding used by the published case study: 1:09.4 becomes 70 s).
    """

    actual_ds: int
    goal_ds: int
    round_up_to_second: bool = False


TargetSpec = ExplicitDeficit | TotalsTarget


@dataclass(frozen=True)
class RunRequest:
    """Everything one solver invocation needs."""

    splits_path: str
    bounds: BoundsSource
    target: TargetSpec
    solver: SolverConfig
    output_format: ReportFormat = ReportFormat.Table


@dataclass(frozen=True)
class ReportRow:
    distance_km: float
    actual_pace_ds: int
    predicted_pace_ds: int
    difference_ds: int
    capacity_ds: int


def resolve_target(spec: TargetSpec) -> int:
    if isinstance(spec, ExplicitDeficit):
        if spec.deficit_ds < 0:
            raise InputFormatError(
                f"deficit must be non-negative, got {spec.deficit_ds} ds"
            )
        return spec.deficit_ds
    if spec.actual_ds < spec.goal_ds:
        raise InputFormatError(
            f"goal {format_duration(spec.goal_ds)} is slower than the actual "
            f"time {format_duration(spec.actual_ds)}: no deficit to make up"
        )
    raw = spec.actual_ds - spec.goal_ds
    if spec.round_up_to_second:
        return -(-raw // 10) * 10
    return raw


def load_inputs(request: RunRequest) -> tuple[list[KmSplit], DeficitProblem]:
    """Read and validate the request's inputs; no solvability gate."""
    splits = parse_splits_csv(Path(request.splits_path).read_bytes())
    if not splits:
        raise InputFormatError(f"{request.splits_path}: no split rows")
    target = resolve_target(request.target)
    if isinstance(request.bounds, BoundsFile):
        caps = parse_bounds_csv(Path(request.bounds.path).read_bytes())
        if len(caps) != len(splits):
            raise InputFormatError(
                f"bounds file has {len(caps)} rows but splits file has "
                f"{len(splits)}"
            )
        problem = DeficitProblem(target=target, capacities=tuple(caps))
    else:
        problem = problem_from_splits(splits, target)
    return splits, problem


def build_problem(request: RunRequest) -> DeficitProblem:
    """Assemble the problem and refuse outright unsolvable requests."""
    _, problem = load_inputs(request)
    if not check_solvable(problem):
        raise UnsolvableError(solvability_message(problem))
    return problem


def report_rows(splits: list[KmSplit], plan: SavingsPlan,
                problem: DeficitProblem) -> list[ReportRow]:
    if len(splits) != problem.n:
        raise ProblemError(
            f"problem has {problem.n} segments, splits have {len(splits)}"
        )
    predicted = apply_plan(splits, plan)
    rows: list[ReportRow] = []
    cum_m = 0.0
    for split, pred, saving, cap in zip(splits, predicted, plan.savings,
                                        problem.capacities):
        cum_m += split.length_m
        rows.append(ReportRow(
            distance_km=cum_m / 1000.0,
            actual_pace_ds=split.pace_ds,
            predicted_pace_ds=pred.pace_ds,
            difference_ds=saving,
            capacity_ds=cap,
        ))
    return rows


def _seconds(ds: int) -> str:
    """Deciseconds as seconds, trailing .0 trimmed: 18 -> '1.8', 10 -> '1'."""
    q, r = divmod(int(ds), 10)
    return str(q) if r == 0 else f"{q}.{r}"


def _table_pace(ds: int) -> str:
    # Published tables pad the 0.1 s resolution to two digits.
    return format_duration(ds) + "0"


def _km(value: float) -> str:
    return f"{value:g}"


def render_report(splits: list[KmSplit], plan: SavingsPlan,
                  problem: DeficitProblem, format: ReportFormat) -> bytes:
    """Render one feasible plan against the recorded splits."""
    fit = fitness(plan, problem)
    if not fit.feasible:
        raise ProblemError(
            f"refusing to report an infeasible plan: total savings "
            f"{plan.total()} ds, target {problem.target} ds"
        )
    rows = report_rows(splits, plan, problem)
    total_actual = total_time(splits)
    total_diff = plan.total()
    total_predicted = total_actual - total_diff
    total_capacity = sum(problem.capacities)

    if format is ReportFormat.Table:
        lines = ["Distance [km] | Actual pace | Predicted pace | "
                 "Difference [s] | Lower bounds [s] | Upper bounds [s]"]
        for r in rows:
            lines.append(
                f"{_km(r.distance_km)} | {_table_pace(r.actual_pace_ds)} | "
                f"{_table_pace(r.predicted_pace_ds)} | "
                f"{_seconds(r.difference_ds)} | {_seconds(r.capacity_ds)} | 0"
            )
        lines.append(
            f"Total: | {_table_pace(total_actual)} | "
            f"{_table_pace(total_predicted)} | {_seconds(total_diff)} | "
            f"{_seconds(total_capacity)} | 0"
        )
        return ("\n".join(lines) + "\n").encode("utf-8")

    if format is ReportFormat.Csv:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["km", "actual_pace_ds", "predicted_pace_ds",
                         "difference_ds", "capacity_ds"])
        for r in rows:
            writer.writerow([_km(r.distance_km), r.actual_pace_ds,
                             r.predicted_pace_ds, r.difference_ds,
                             r.capacity_ds])
        writer.writerow(["total", total_actual, total_predicted, total_diff,
                         total_capacity])
        return out.getvalue().encode("utf-8")

    record = {
        "rows": [
            {
                "km": r.distance_km,
                "actual_pace_ds": r.actual_pace_ds,
                "predicted_pace_ds": r.predicted_pace_ds,
                "difference_ds": r.difference_ds,
                "capacity_ds": r.capacity_ds,
            }
            for r in rows
        ],
        "totals": {
            "actual_ds": total_actual,
            "predicted_ds": total_predicted,
            "difference_ds": total_diff,
            "capacity_ds": total_capacity,
        },
        "plan": plan_record(plan, problem),
    }
    return (json.dumps(record, indent=2) + "\n").encode("utf-8")


def emit_plot_data(splits: list[KmSplit], plan: SavingsPlan) -> bytes:
    """Per-segment series (pace, altitude, savings) as plottable CSV."""
    if len(splits) != len(plan.savings):
        raise ProblemError(
            f"plan has {len(plan.savings)} segments, splits have {len(splits)}"
        )
    predicted = apply_plan(splits, plan)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["km", "actual_pace_ds", "predicted_pace_ds",
                     "alt_delta_m", "saving_ds"])
    cum_m = 0.0
    for split, pred, saving in zip(splits, predicted, plan.savings):
        cum_m += split.length_m
        writer.writerow([_km(cum_m / 1000.0), split.pace_ds, pred.pace_ds,
                         f"{split.alt_delta_m:g}", saving])
    return out.getvalue().encode("utf-8")
