"""Report rendering, plot data, request assembly."""

import csv
import io
import json

import pytest

from marathon_deficit import (
    DeficitProblem,
    InputFormatError,
    KmSplit,
    ProblemError,
    ReportFormat,
    SavingsPlan,
    SolverConfig,
    UnsolvableError,
    build_problem,
    emit_plot_data,
    render_report,
)
from marathon_deficit.reporting import (
    BoundsFile,
    DeriveFromAltitude,
    ExplicitDeficit,
    RunRequest,
    TotalsTarget,
    load_inputs,
    report_rows,
    resolve_target,
)

# Difference column of the published result table, in deciseconds.
PUBLISHED_PLAN = (
    0, 18, 38, 37, 0, 34, 0, 0, 32, 0,
    38, 18, 18, 10, 0, 17, 39, 0, 36, 0,
    0, 0, 17, 35, 26, 0, 37, 38, 16, 26,
    0, 34, 39, 16, 0, 0, 0, 38, 28, 15,
    0, 0, 0,
)


def two_segment_case():
    splits = [
        KmSplit(index=1, length_m=1000.0, pace_ds=2400, alt_delta_m=0.0),
        KmSplit(index=2, length_m=500.0, pace_ds=1200, alt_delta_m=-2.5),
    ]
    problem = DeficitProblem(target=15, capacities=(20, 0))
    plan = SavingsPlan((15, 0))
    return splits, problem, plan


# ----------------------------------------------------------------- targets

def test_resolve_target_explicit():
    assert resolve_target(ExplicitDeficit(694)) == 694
    with pytest.raises(InputFormatError):
        resolve_target(ExplicitDeficit(-1))


def test_resolve_target_totals_exact_and_rounded():
    pair = TotalsTarget(actual_ds=108694, goal_ds=108000)
    assert resolve_target(pair) == 694
    rounded = TotalsTarget(actual_ds=108694, goal_ds=108000,
                           round_up_to_second=True)
    assert resolve_target(rounded) == 700


def test_resolve_target_round_up_noop_on_whole_seconds():
    spec = TotalsTarget(actual_ds=108700, goal_ds=108000,
                        round_up_to_second=True)
    assert resolve_target(spec) == 700


def test_resolve_target_goal_slower_than_actual():
    with pytest.raises(InputFormatError, match="no deficit"):
        resolve_target(TotalsTarget(actual_ds=100, goal_ds=200))
    assert resolve_target(TotalsTarget(actual_ds=100, goal_ds=100)) == 0


# ------------------------------------------------------------ report rows

def test_report_rows_invariants(fixture_splits, fixture_problem):
    plan = SavingsPlan(PUBLISHED_PLAN)
    rows = report_rows(fixture_splits, plan, fixture_problem)
    assert len(rows) == 43
    for row in rows:
        assert row.predicted_pace_ds + row.difference_ds == row.actual_pace_ds
        assert 0 <= row.difference_ds <= row.capacity_ds
    assert rows[0].distance_km == pytest.approx(1.0)
    assert rows[-1].distance_km == pytest.approx(42.195)


# ----------------------------------------------------------------- table

def test_render_table_total_row_matches_published(fixture_splits,
                                                  fixture_problem):
    plan = SavingsPlan(PUBLISHED_PLAN)
    table = render_report(fixture_splits, plan, fixture_problem,
                          ReportFormat.Table).decode()
    assert table.splitlines()[-1] == \
        "Total: | 03:01:09.40 | 02:59:59.40 | 70 | 82 | 0"
    assert "2 | 04:05.40 | 04:03.60 | 1.8 | 2 | 0" in table
    assert "25 | 04:23.80 | 04:21.20 | 2.6 | 4 | 0" in table
    assert "42.195 | 01:45.30 | 01:45.30 | 0 | 0 | 0" in table


def test_render_table_golden_small_case():
    splits, problem, plan = two_segment_case()
    table = render_report(splits, plan, problem, ReportFormat.Table).decode()
    assert table == (
        "Distance [km] | Actual pace | Predicted pace | Difference [s] | "
        "Lower bounds [s] | Upper bounds [s]\n"
        "1 | 04:00.00 | 03:58.50 | 1.5 | 2 | 0\n"
        "1.5 | 02:00.00 | 02:00.00 | 0 | 0 | 0\n"
        "Total: | 06:00.00 | 05:58.50 | 1.5 | 2 | 0\n"
    )


def test_render_zero_plan_identity():
    splits = [KmSplit(index=1, length_m=1000.0, pace_ds=2438, alt_delta_m=0.0)]
    problem = DeficitProblem(target=0, capacities=(20,))
    table = render_report(splits, SavingsPlan((0,)), problem,
                          ReportFormat.Table).decode()
    assert "1 | 04:03.80 | 04:03.80 | 0 | 2 | 0" in table


def test_render_report_byte_identical():
    splits, problem, plan = two_segment_case()
    for fmt in ReportFormat:
        assert render_report(splits, plan, problem, fmt) == \
            render_report(splits, plan, problem, fmt)


def test_render_refuses_infeasible_plan():
    splits, problem, _ = two_segment_case()
    with pytest.raises(ProblemError, match="infeasible"):
        render_report(splits, SavingsPlan((10, 0)), problem,
                      ReportFormat.Table)


# ------------------------------------------------------------------- csv

def test_render_csv_values(fixture_splits, fixture_problem):
    plan = SavingsPlan(PUBLISHED_PLAN)
    data = render_report(fixture_splits, plan, fixture_problem,
                         ReportFormat.Csv).decode()
    rows = list(csv.DictReader(io.StringIO(data)))
    assert len(rows) == 44
    km2 = rows[1]
    assert km2 == {"km": "2", "actual_pace_ds": "2454",
                   "predicted_pace_ds": "2436", "difference_ds": "18",
                   "capacity_ds": "20"}
    total = rows[-1]
    assert total == {"km": "total", "actual_pace_ds": "108694",
                     "predicted_pace_ds": "107994", "difference_ds": "700",
                     "capacity_ds": "820"}


# ------------------------------------------------------------------ json

def test_render_json_round_trips_plan(fixture_splits, fixture_problem):
    plan = SavingsPlan(PUBLISHED_PLAN)
    record = json.loads(render_report(fixture_splits, plan, fixture_problem,
                                      ReportFormat.Json))
    assert record["plan"] == {"savings_ds": list(PUBLISHED_PLAN),
                              "total_ds": 700, "feasible": True}
    assert SavingsPlan(tuple(record["plan"]["savings_ds"])) == plan
    assert record["totals"] == {"actual_ds": 108694, "predicted_ds": 107994,
                                "difference_ds": 700, "capacity_ds": 820}
    assert len(record["rows"]) == 43
    row2 = record["rows"][1]
    assert row2["actual_pace_ds"] == 2454
    assert row2["predicted_pace_ds"] == 2436


# ------------------------------------------------------------- plot data

def test_emit_plot_data_fixture(fixture_splits):
    plan = SavingsPlan(PUBLISHED_PLAN)
    data = emit_plot_data(fixture_splits, plan).decode()
    lines = data.splitlines()
    assert lines[0] == "km,actual_pace_ds,predicted_pace_ds,alt_delta_m,saving_ds"
    assert len(lines) == 44
    assert lines[2] == "2,2454,2436,0,18"
    assert lines[-1] == "42.195,1053,1053,-2,0"


def test_emit_plot_data_single_split_zero_plan():
    splits = [KmSplit(index=1, length_m=1000.0, pace_ds=2400, alt_delta_m=1.5)]
    data = emit_plot_data(splits, SavingsPlan((0,))).decode()
    assert data.splitlines()[1] == "1,2400,2400,1.5,0"


def test_emit_plot_data_length_mismatch():
    splits, _, _ = two_segment_case()
    with pytest.raises(ProblemError):
        emit_plot_data(splits, SavingsPlan((0,)))


def test_plot_data_agrees_with_csv_report(fixture_splits, fixture_problem):
    plan = SavingsPlan(PUBLISHED_PLAN)
    plot_rows = list(csv.DictReader(io.StringIO(
        emit_plot_data(fixture_splits, plan).decode())))
    report = list(csv.DictReader(io.StringIO(
        render_report(fixture_splits, plan, fixture_problem,
                      ReportFormat.Csv).decode())))
    for p, r in zip(plot_rows, report[:-1]):
        assert p["km"] == r["km"]
        assert p["actual_pace_ds"] == r["actual_pace_ds"]
        assert p["predicted_pace_ds"] == r["predicted_pace_ds"]
        assert p["saving_ds"] == r["difference_ds"]


# --------------------------------------------------------------- requests

def default_request(splits_path, bounds_path):
    return RunRequest(
        splits_path=splits_path,
        bounds=BoundsFile(bounds_path),
        target=ExplicitDeficit(700),
        solver=SolverConfig(),
    )


def test_load_inputs_fixture(splits_csv_path, bounds_csv_path):
    splits, problem = load_inputs(default_request(splits_csv_path,
                                                  bounds_csv_path))
    assert len(splits) == 43
    assert problem.n == 43
    assert sum(problem.capacities) == 820


def test_build_problem_gates_solvability(splits_csv_path, bounds_csv_path):
    request = RunRequest(
        splits_path=splits_csv_path,
        bounds=BoundsFile(bounds_csv_path),
        target=ExplicitDeficit(830),
        solver=SolverConfig(),
    )
    with pytest.raises(UnsolvableError, match="820 ds < deficit 830 ds"):
        build_problem(request)
    ok = build_problem(default_request(splits_csv_path, bounds_csv_path))
    assert ok.target == 700


def test_load_inputs_derive_bounds(splits_csv_path, fixture_capacities):
    request = RunRequest(
        splits_path=splits_csv_path,
        bounds=DeriveFromAltitude(),
        target=ExplicitDeficit(700),
        solver=SolverConfig(),
    )
    _, problem = load_inputs(request)
    assert problem.capacities == fixture_capacities


def test_load_inputs_bounds_length_mismatch(tmp_path, splits_csv_path):
    short = tmp_path / "bounds.csv"
    short.write_text("index,capacity_ds\n1,20\n")
    request = RunRequest(
        splits_path=splits_csv_path,
        bounds=BoundsFile(str(short)),
        target=ExplicitDeficit(10),
        solver=SolverConfig(),
    )
    with pytest.raises(InputFormatError, match="1 rows"):
        load_inputs(request)
