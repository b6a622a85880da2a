"""The deficit make-up problem: capacities, plans, fitness.

A problem holds a target deficit and, per segment, the maximum time that can
be saved there (its capacity). A savings plan allocates integer deciseconds
per segment; it is feasible exactly when its sum equals the target. The
search happens in the unit hypercube and is mapped here onto plans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, ProblemError
from .track_ingest import KmSplit, SegmentClass, _read_csv, classify_segment

FLAT_CAPACITY_DS = 20
DOWNHILL_CAPACITY_DS = 40
UPHILL_CAPACITY_DS = 0

# Each excess decisecond beyond the target costs this much fitness, so an
# overshoot is always worse than the same-sized shortfall. Any factor > 1
# works; feasibility itself is an exact zero either way.
OVERSHOOT_PENALTY = 100

BOUNDS_HEADER = ["index", "capacity_ds"]


@dataclass(frozen=True)
class DeficitProblem:
    """Target deficit plus per-segment savings capacities, in deciseconds."""

    target: int
    capacities: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.target < 0:
            raise ProblemError(f"target must be non-negative, got {self.target}")
        if not self.capacities:
            raise ProblemError("capacities must be non-empty")
        for j, cap in enumerate(self.capacities):
            if cap < 0:
                raise ProblemError(
                    f"capacity for segment {j + 1} must be non-negative, got {cap}"
                )
        object.__setattr__(self, "capacities", tuple(int(c) for c in self.capacities))
        object.__setattr__(self, "target", int(self.target))

    @property
    def n(self) -> int:
        return len(self.capacities)

    def capacities_array(self) -> np.ndarray:
        return np.asarray(self.capacities, dtype=np.int64)


@dataclass(frozen=True)
class SavingsPlan:
    """Per-segment savings in deciseconds."""

    savings: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "savings", tuple(int(s) for s in self.savings))
        for j, s in enumerate(self.savings):
            if s < 0:
                raise ProblemError(
                    f"saving for segment {j + 1} must be non-negative, got {s}"
                )

    def total(self) -> int:
        return sum(self.savings)


@dataclass(frozen=True)
class FitnessValue:
    """Non-negative gap to the target; zero means the plan is feasible."""

    value: int
    feasible: bool

    def __post_init__(self) -> None:
        if (self.value == 0) != self.feasible:
            raise ProblemError("feasible must hold exactly when value is 0")


def capacities_from_classes(classes: list[SegmentClass],
                            final_is_partial: bool) -> list[int]:
    """Savings capacity per gradient class, in deciseconds.

    Flat segments allow 2 s, downhill 4 s, uphill nothing. A partial final
    segment is excluded from optimization: its capacity is forced to 0
    whatever its gradient.
    """
    if not classes:
        raise ProblemError("class list must be non-empty")
    table = {
        SegmentClass.Flat: FLAT_CAPACITY_DS,
        SegmentClass.Downhill: DOWNHILL_CAPACITY_DS,
        SegmentClass.Uphill: UPHILL_CAPACITY_DS,
    }
    caps = [table[c] for c in classes]
    if final_is_partial:
        caps[-1] = 0
    return caps


def check_solvable(problem: DeficitProblem) -> bool:
    """A plan summing to the target exists iff the capacities can cover it."""
    return sum(problem.capacities) >= problem.target


def solvability_message(problem: DeficitProblem) -> str:
    """One-line verdict stating the capacity/target comparison."""
    cap = sum(problem.capacities)
    if cap >= problem.target:
        return (f"solvable: total savings capacity {cap} ds covers "
                f"the {problem.target} ds deficit")
    return (f"unsolvable: total savings capacity {cap} ds < deficit "
            f"{problem.target} ds; a feasible plan requires the capacity "
            "sum to be at least the deficit")


def map_decision(x: np.ndarray, problem: DeficitProblem) -> SavingsPlan:
    """Map a point of [0,1]^n onto an integer savings plan.

    Each coordinate scales its segment's capacity; the product is rounded up
    to a whole decisecond, so any positive coordinate saves at least 1 ds on
    a segment with spare capacity.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (problem.n,):
        raise ProblemError(
            f"decision vector has shape {x.shape}, expected ({problem.n},)"
        )
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ProblemError("decision vector out of [0, 1]")
    savings = np.ceil(problem.capacities_array() * x).astype(np.int64)
    return SavingsPlan(savings=tuple(int(s) for s in savings))


def fitness(plan: SavingsPlan, problem: DeficitProblem) -> FitnessValue:
    """Gap between a plan's total savings and the target.

    A shortfall counts 1:1; an overshoot is penalized per excess decisecond.
    Zero gap means the deficit is closed exactly.
    """
    if len(plan.savings) != problem.n:
        raise ProblemError(
            f"plan has {len(plan.savings)} segments, problem has {problem.n}"
        )
    total = plan.total()
    if total <= problem.target:
        value = problem.target - total
    else:
        value = OVERSHOOT_PENALTY * (total - problem.target)
    return FitnessValue(value=value, feasible=value == 0)


def apply_plan(splits: list[KmSplit], plan: SavingsPlan) -> list[KmSplit]:
    """Subtract each segment's saving from its recorded pace."""
    if len(splits) != len(plan.savings):
        raise ProblemError(
            f"plan has {len(plan.savings)} segments, splits have {len(splits)}"
        )
    out: list[KmSplit] = []
    for split, saving in zip(splits, plan.savings):
        if saving >= split.pace_ds:
            raise ProblemError(
                f"segment {split.index}: saving {saving} ds >= pace "
                f"{split.pace_ds} ds would leave no time to run it"
            )
        out.append(KmSplit(index=split.index, length_m=split.length_m,
                           pace_ds=split.pace_ds - saving,
                           alt_delta_m=split.alt_delta_m))
    return out


def total_time(splits: list[KmSplit]) -> int:
    """Sum of segment paces in deciseconds."""
    if not splits:
        raise ProblemError("cannot total an empty split list")
    return sum(s.pace_ds for s in splits)


def parse_bounds_csv(data: bytes | str) -> list[int]:
    """Parse a bounds CSV (`index,capacity_ds`) into a capacity list."""
    what = "bounds csv"
    caps: list[int] = []
    for row_no, row in _read_csv(data, BOUNDS_HEADER, what):
        try:
            index = int(row[0])
            cap = int(row[1])
        except ValueError:
            raise InputFormatError(
                f"{what}: row {row_no}: fields must be integers, got {row!r}"
            ) from None
        if index != len(caps) + 1:
            raise InputFormatError(
                f"{what}: row {row_no}: index {index} out of order, "
                f"expected {len(caps) + 1}"
            )
        if cap < 0:
            raise InputFormatError(
                f"{what}: row {row_no}: capacity_ds must be non-negative, got {cap}"
            )
        caps.append(cap)
    if not caps:
        raise InputFormatError(f"{what}: no data rows")
    return caps


def plan_record(plan: SavingsPlan, problem: DeficitProblem) -> dict:
    """JSON-ready record of one plan."""
    fit = fitness(plan, problem)
    return {
        "savings_ds": [int(s) for s in plan.savings],
        "total_ds": plan.total(),
        "feasible": fit.feasible,
    }


def problem_from_splits(splits: list[KmSplit], target: int) -> DeficitProblem:
    """Derive a problem from splits: classify gradients, assign capacities."""
    if not splits:
        raise ProblemError("cannot build a problem from zero splits")
    classes = [classify_segment(s.alt_delta_m) for s in splits]
    final_is_partial = splits[-1].length_m < 1000.0
    caps = capacities_from_classes(classes, final_is_partial)
    return DeficitProblem(target=target, capacities=tuple(caps))
