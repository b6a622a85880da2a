"""Seeded differential evolution over the unit hypercube.

Strategy: random base vector, one scaled difference, binomial crossover,
one-to-one selection (ties go to the challenger). The run stops after a
quota of feasible evaluations or when the evaluation budget is spent.

Determinism contract
--------------------
A run is fully determined by (seed, config, problem). All randomness comes
from one splitmix64 stream consumed in a fixed order:

1. population init: Np*n uniforms, row-major;
2. per generation, per target index i: indices r1, r2, r3 by rejection
   redraw (one draw per attempt), then j_rand (one draw), then exactly n
   crossover uniforms, one per coordinate, consumed even where j == j_rand.

Selection is applied in place, so a replaced individual is visible to later
mutations within the same generation. Both backends (compiled kernel and
the numpy engine below) implement this order bit-for-bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .deficit_problem import (
    OVERSHOOT_PENALTY,
    DeficitProblem,
    FitnessValue,
    SavingsPlan,
    check_solvable,
    plan_record,
    solvability_message,
)
from .errors import ConfigError, UnsolvableError
from .rng import SplitMix64

# A candidate is a float64 vector in [0,1]^n; a population is the (Np, n)
# array whose rows are candidates.
CandidateVector = np.ndarray

_INT64_MAX = 2**63 - 1


class TerminationReason(enum.Enum):
    FeasibleQuota = "FeasibleQuota"
    EvaluationBudget = "EvaluationBudget"


@dataclass(frozen=True)
class SolverConfig:
    """Search parameters; defaults mirror the case-study settings."""

    population_size: int = 100
    scale_factor: float = 0.5
    crossover_rate: float = 0.9
    max_evaluations: int = 80_000
    feasible_hits_to_stop: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 4:
            raise ConfigError(
                f"population_size must be >= 4 (mutation draws 3 distinct "
                f"non-target indices), got {self.population_size}"
            )
        if not 0.0 < self.scale_factor <= 2.0:
            raise ConfigError(
                f"scale_factor must be in (0, 2], got {self.scale_factor}"
            )
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigError(
                f"crossover_rate must be in [0, 1], got {self.crossover_rate}"
            )
        if self.max_evaluations < self.population_size:
            raise ConfigError(
                f"max_evaluations ({self.max_evaluations}) must cover at least "
                f"one full population ({self.population_size})"
            )
        if self.max_evaluations > _INT64_MAX:
            raise ConfigError("max_evaluations too large for a 64-bit counter")
        if not 1 <= self.feasible_hits_to_stop <= _INT64_MAX:
            raise ConfigError(
                f"feasible_hits_to_stop must be >= 1, got "
                f"{self.feasible_hits_to_stop}"
            )
        if not 0 <= self.seed < 2**64:
            raise ConfigError(
                f"seed must be a 64-bit unsigned integer, got {self.seed}"
            )


class FeasibleArchive:
    """Insertion-ordered, deduplicated collection of feasible plans."""

    def __init__(self) -> None:
        self._seen: dict[tuple[int, ...], SavingsPlan] = {}

    def add(self, plan: SavingsPlan) -> bool:
        """Insert a plan; returns False when it was already archived."""
        key = plan.savings
        if key in self._seen:
            return False
        self._seen[key] = plan
        return True

    @property
    def plans(self) -> tuple[SavingsPlan, ...]:
        return tuple(self._seen.values())

    def __len__(self) -> int:
        return len(self._seen)

    def __iter__(self):
        return iter(self._seen.values())

    def __contains__(self, plan: SavingsPlan) -> bool:
        return plan.savings in self._seen


@dataclass(frozen=True)
class RunResult:
    """Outcome of one search run.

    `generation_best` traces the best fitness value after the initial
    population and after each generation; it exists so the monotone-improvement
    guarantee of one-to-one selection is directly observable.
    """

    archive: FeasibleArchive
    evaluations_used: int
    feasible_hits: int
    best_fitness: FitnessValue
    terminated_by: TerminationReason
    generation_best: tuple[int, ...] = field(repr=False)


def strategy_name() -> str:
    return "DE/rand/1/bin"


def initialize_population(config: SolverConfig, n: int,
                          rng: SplitMix64) -> np.ndarray:
    """Np candidates, each coordinate uniform on [0, 1), as an (Np, n) array."""
    if n < 1:
        raise ConfigError(f"dimension must be >= 1, got {n}")
    return rng.uniforms(config.population_size * n).reshape(
        config.population_size, n
    )


def draw_indices(population_size: int, target_index: int,
                 rng: SplitMix64) -> tuple[int, int, int]:
    """Three mutually distinct indices, all distinct from the target.

    Rejection redraw: each attempt consumes exactly one stream value, so the
    consumed count is itself part of the deterministic replay.
    """
    while True:
        r1 = rng.randint(population_size)
        if r1 != target_index:
            break
    while True:
        r2 = rng.randint(population_size)
        if r2 != target_index and r2 != r1:
            break
    while True:
        r3 = rng.randint(population_size)
        if r3 != target_index and r3 != r1 and r3 != r2:
            break
    return r1, r2, r3


def donor_vector(x1: np.ndarray, x2: np.ndarray, x3: np.ndarray,
                 scale_factor: float) -> np.ndarray:
    """Base-plus-scaled-difference donor, clamped into [0, 1]."""
    return np.clip(x1 + scale_factor * (x2 - x3), 0.0, 1.0)


def mutate(population: np.ndarray, target_index: int, scale_factor: float,
           rng: SplitMix64) -> np.ndarray:
    """Donor for one target: combine three random distinct other members."""
    if population.shape[0] < 4:
        raise ConfigError(
            f"mutation needs a population of >= 4, got {population.shape[0]}"
        )
    r1, r2, r3 = draw_indices(population.shape[0], target_index, rng)
    return donor_vector(population[r1], population[r2], population[r3],
                        scale_factor)


def crossover(target: np.ndarray, donor: np.ndarray, crossover_rate: float,
              rng: SplitMix64) -> np.ndarray:
    """Binomial crossover; the j_rand coordinate always comes from the donor."""
    if target.shape != donor.shape:
        raise ConfigError(
            f"target shape {target.shape} != donor shape {donor.shape}"
        )
    n = target.shape[0]
    j_rand = rng.randint(n)
    take = rng.uniforms(n) <= crossover_rate
    take[j_rand] = True
    return np.where(take, donor, target)


def select(target: np.ndarray, trial: np.ndarray, f_target: FitnessValue,
           f_trial: FitnessValue) -> np.ndarray:
    """One-to-one selection; a tie accepts the trial."""
    return trial if f_trial.value <= f_target.value else target


def _run_numpy(config: SolverConfig, problem: DeficitProblem):
    """Reference engine on plain numpy; mirrors the compiled kernel exactly."""
    n = problem.n
    target_ds = problem.target
    np_size = config.population_size
    quota = config.feasible_hits_to_stop
    budget = config.max_evaluations
    caps_f = problem.capacities_array().astype(np.float64)

    rng = SplitMix64(config.seed)
    pop = initialize_population(config, n, rng)

    savings_all = np.ceil(caps_f * pop).astype(np.int64)
    totals = savings_all.sum(axis=1)
    pop_fit = np.where(
        totals <= target_ds,
        target_ds - totals,
        OVERSHOOT_PENALTY * (totals - target_ds),
    ).astype(np.int64)

    hit_rows: list[tuple[int, ...]] = []
    evals = 0
    hits = 0
    stop = False
    best0 = _INT64_MAX
    for i in range(np_size):
        evals += 1
        fit = int(pop_fit[i])
        if fit < best0:
            best0 = fit
        if fit == 0:
            hit_rows.append(tuple(int(s) for s in savings_all[i]))
            hits += 1
            if hits >= quota:
                stop = True
                break
    gen_best = [best0]

    while not stop and evals + np_size <= budget:
        for i in range(np_size):
            donor = mutate(pop, i, config.scale_factor, rng)
            trial = crossover(pop[i], donor, config.crossover_rate, rng)
            savings = np.ceil(caps_f * trial).astype(np.int64)
            s_total = int(savings.sum())
            if s_total <= target_ds:
                fit = target_ds - s_total
            else:
                fit = OVERSHOOT_PENALTY * (s_total - target_ds)
            evals += 1
            if fit == 0:
                hit_rows.append(tuple(int(s) for s in savings))
                hits += 1
            if fit <= pop_fit[i]:
                pop[i] = trial
                pop_fit[i] = fit
            if hits >= quota:
                stop = True
                break
        gen_best.append(int(pop_fit.min()))

    return evals, hits, hit_rows, gen_best, hits >= quota


def _run_numba(config: SolverConfig, problem: DeficitProblem):
    kernel = kernels.compiled_kernel()
    evals, hits, hit_plans, gen_best, quota_hit = kernel(
        problem.capacities_array(),
        problem.target,
        config.population_size,
        config.scale_factor,
        config.crossover_rate,
        config.feasible_hits_to_stop,
        config.max_evaluations,
        OVERSHOOT_PENALTY,
        np.uint64(config.seed),
    )
    hit_rows = [tuple(int(s) for s in row) for row in hit_plans]
    return int(evals), int(hits), hit_rows, [int(b) for b in gen_best], bool(quota_hit)


def run(config: SolverConfig, problem: DeficitProblem) -> RunResult:
    """Search for plans that close the deficit exactly.

    Every fitness evaluation counts against the budget, the initial
    population included; every evaluation with fitness 0 counts one feasible
    hit and goes to the archive (deduplicated). A generation starts only if
    a full population evaluation still fits in the budget.
    """
    if not check_solvable(problem):
        raise UnsolvableError(solvability_message(problem))

    backend = kernels.active_backend()
    if backend == "numba":
        evals, hits, hit_rows, gen_best, quota_hit = _run_numba(config, problem)
    else:
        evals, hits, hit_rows, gen_best, quota_hit = _run_numpy(config, problem)

    archive = FeasibleArchive()
    for row in hit_rows:
        archive.add(SavingsPlan(savings=row))

    best = gen_best[-1]
    return RunResult(
        archive=archive,
        evaluations_used=evals,
        feasible_hits=hits,
        best_fitness=FitnessValue(value=best, feasible=best == 0),
        terminated_by=(TerminationReason.FeasibleQuota if quota_hit
                       else TerminationReason.EvaluationBudget),
        generation_best=tuple(gen_best),
    )


def run_report_record(config: SolverConfig, problem: DeficitProblem,
                      result: RunResult) -> dict:
    """JSON-ready record of a whole run, archive included."""
    return {
        "strategy": strategy_name(),
        "np": config.population_size,
        "f": config.scale_factor,
        "cr": config.crossover_rate,
        "seed": config.seed,
        "evaluations": result.evaluations_used,
        "feasible_hits": result.feasible_hits,
        "terminated_by": result.terminated_by.value,
        "plans": [plan_record(p, problem) for p in result.archive],
    }
