"""Command-line interface.

`deficit run` loads splits and capacities, searches for feasible savings
plans, and prints a report. `deficit check` validates the same inputs and
prints the solvability verdict without searching.

Exit codes: 0 when the run stopped at the feasible-hit quota (or the check
verdict is solvable); 2 when the evaluation budget ran out first; 1 for any
input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import kernels
from .de_engine import (
    SolverConfig,
    TerminationReason,
    run,
    run_report_record,
)
from .deficit_problem import check_solvable, solvability_message
from .errors import DeficitError, UnsolvableError
from .reporting import (
    BoundsFile,
    DeriveFromAltitude,
    ExplicitDeficit,
    ReportFormat,
    RunRequest,
    TotalsTarget,
    emit_plot_data,
    load_inputs,
    render_report,
)
from .track_ingest import parse_duration


def _add_input_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--splits", required=True, metavar="CSV",
                        help="splits file (index,length_m,pace,alt_delta_m)")
    bounds = parser.add_mutually_exclusive_group(required=True)
    bounds.add_argument("--bounds", metavar="CSV",
                        help="capacity bounds file (index,capacity_ds)")
    bounds.add_argument("--derive-bounds", action="store_true",
                        help="derive capacities from the splits' altitude deltas")
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--deficit-ds", type=int, metavar="DS",
                        help="target deficit in deciseconds")
    target.add_argument("--actual", metavar="DUR",
                        help="achieved finish time ([H:]MM:SS.d); needs --goal")
    parser.add_argument("--goal", metavar="DUR",
                        help="goal finish time ([H:]MM:SS.d)")
    parser.add_argument("--paper-rounding", action="store_true",
                        help="round the actual-goal deficit up to a whole second")


def _add_solver_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--np", type=int, default=100, dest="np_size",
                        help="population size (default 100)")
    parser.add_argument("--f", type=float, default=0.5,
                        help="scale factor (default 0.5)")
    parser.add_argument("--cr", type=float, default=0.9,
                        help="crossover rate (default 0.9)")
    parser.add_argument("--quota", type=int, default=100,
                        help="feasible hits to stop at (default 100)")
    parser.add_argument("--budget", type=int, default=80_000,
                        help="max fitness evaluations (default 80000)")
    parser.add_argument("--seed", type=int, default=0,
                        help="64-bit unsigned seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deficit",
        description="Search for per-kilometer savings plans that close a "
                    "race-time deficit exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the search and report a plan")
    _add_input_args(run_p)
    _add_solver_args(run_p)
    run_p.add_argument("--format", choices=[f.value for f in ReportFormat],
                       default="table", help="report format (default table)")
    run_p.add_argument("--plot-data", metavar="PATH",
                       help="also write per-segment plot series CSV here")
    plan = run_p.add_mutually_exclusive_group()
    plan.add_argument("--plan-index", type=int, default=0, metavar="I",
                      help="archived plan to report (default 0, the first)")
    plan.add_argument("--all-plans", action="store_true",
                      help="dump the whole run (all plans) as JSON")

    check_p = sub.add_parser("check",
                             help="validate inputs and print the solvability "
                                  "verdict without searching")
    _add_input_args(check_p)
    return parser


def _request_from_args(args: argparse.Namespace) -> RunRequest:
    if args.actual is not None or args.goal is not None:
        if args.actual is None or args.goal is None:
            raise DeficitError("--actual and --goal must be given together")
        target = TotalsTarget(
            actual_ds=parse_duration(args.actual),
            goal_ds=parse_duration(args.goal),
            round_up_to_second=args.paper_rounding,
        )
    else:
        if args.paper_rounding:
            raise DeficitError("--paper-rounding only applies to --actual/--goal")
        target = ExplicitDeficit(deficit_ds=args.deficit_ds)

    bounds = BoundsFile(args.bounds) if args.bounds else DeriveFromAltitude()

    if hasattr(args, "np_size"):
        solver = SolverConfig(
            population_size=args.np_size,
            scale_factor=args.f,
            crossover_rate=args.cr,
            max_evaluations=args.budget,
            feasible_hits_to_stop=args.quota,
            seed=args.seed,
        )
        fmt = ReportFormat(args.format)
    else:
        solver = SolverConfig()
        fmt = ReportFormat.Table
    return RunRequest(splits_path=args.splits, bounds=bounds, target=target,
                      solver=solver, output_format=fmt)


def _cmd_run(args: argparse.Namespace) -> int:
    request = _request_from_args(args)
    splits, problem = load_inputs(request)
    if not check_solvable(problem):
        raise UnsolvableError(solvability_message(problem))

    result = run(request.solver, problem)
    print(
        f"terminated by {result.terminated_by.value} after "
        f"{result.evaluations_used} evaluations: {result.feasible_hits} "
        f"feasible hits, {len(result.archive)} distinct plans "
        f"[{kernels.active_backend()} backend]",
        file=sys.stderr,
    )

    plans = result.archive.plans
    if not plans:
        print(
            f"no feasible plan found within the budget; best fitness value "
            f"{result.best_fitness.value} ds from the target",
            file=sys.stderr,
        )
        return 2

    if args.all_plans:
        record = run_report_record(request.solver, problem, result)
        sys.stdout.write(json.dumps(record, indent=2) + "\n")
        selected = plans[0]
    else:
        if not 0 <= args.plan_index < len(plans):
            raise DeficitError(
                f"--plan-index {args.plan_index} out of range: archive holds "
                f"{len(plans)} plans"
            )
        selected = plans[args.plan_index]
        report = render_report(splits, selected, problem,
                               request.output_format)
        sys.stdout.write(report.decode("utf-8"))

    if args.plot_data:
        Path(args.plot_data).write_bytes(emit_plot_data(splits, selected))
        print(f"plot data written to {args.plot_data}", file=sys.stderr)

    return 0 if result.terminated_by is TerminationReason.FeasibleQuota else 2


def _cmd_check(args: argparse.Namespace) -> int:
    request = _request_from_args(args)
    splits, problem = load_inputs(request)
    verdict = solvability_message(problem)
    print(f"{len(splits)} segments, target {problem.target} ds")
    print(verdict)
    return 0 if check_solvable(problem) else 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_check(args)
    except DeficitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
