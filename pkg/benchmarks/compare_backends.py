"""Time the compiled search kernel against the pure-numpy engine.

Runs the bundled case study once per backend with identical configuration,
checks that both produce bitwise-identical run reports, and prints the
timings. The first compiled call includes JIT compilation, so it is timed
separately from the warm repeats.

Usage: python benchmarks/compare_backends.py [--seed N] [--repeat K] ...
"""

import argparse
import json
import os
import time

from marathon_deficit import (
    DeficitProblem,
    SolverConfig,
    kernels,
    parse_bounds_csv,
    run,
    run_report_record,
)
from marathon_deficit import fixtures


def timed_run(backend: str, cfg: SolverConfig, problem: DeficitProblem):
    os.environ[kernels.ENV_VAR] = backend
    try:
        started = time.perf_counter()
        result = run(cfg, problem)
        return time.perf_counter() - started, result
    finally:
        os.environ.pop(kernels.ENV_VAR, None)


def best_of(backend: str, cfg: SolverConfig, problem: DeficitProblem,
            repeat: int):
    times = []
    result = None
    for _ in range(repeat):
        elapsed, result = timed_run(backend, cfg, problem)
        times.append(elapsed)
    return min(times), result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--np", type=int, default=100, dest="np_size")
    parser.add_argument("--f", type=float, default=0.5)
    parser.add_argument("--cr", type=float, default=0.9)
    parser.add_argument("--quota", type=int, default=100)
    parser.add_argument("--budget", type=int, default=80_000)
    parser.add_argument("--target", type=int, default=700)
    parser.add_argument("--repeat", type=int, default=3,
                        help="warm repetitions per backend (default 3)")
    args = parser.parse_args()

    capacities = tuple(parse_bounds_csv(fixtures.bounds_bytes()))
    problem = DeficitProblem(target=args.target, capacities=capacities)
    cfg = SolverConfig(
        population_size=args.np_size, scale_factor=args.f,
        crossover_rate=args.cr, max_evaluations=args.budget,
        feasible_hits_to_stop=args.quota, seed=args.seed,
    )
    print(f"case: {problem.n} segments, target {problem.target} ds, "
          f"capacity {sum(capacities)} ds, seed {args.seed}")

    numpy_time, numpy_result = best_of("numpy", cfg, problem, args.repeat)
    print(f"numpy        {numpy_time * 1000:9.2f} ms  "
          f"(best of {args.repeat}, {numpy_result.evaluations_used} evaluations)")

    if not kernels.numba_available():
        print("numba        not installed; nothing to compare")
        return 0

    cold_time, _ = timed_run("numba", cfg, problem)
    warm_time, numba_result = best_of("numba", cfg, problem, args.repeat)
    print(f"numba cold   {cold_time * 1000:9.2f} ms  "
          f"(may include JIT compilation)")
    print(f"numba warm   {warm_time * 1000:9.2f} ms  (best of {args.repeat})")
    print(f"speedup      {numpy_time / warm_time:9.1f}x  (warm vs numpy)")

    same = (json.dumps(run_report_record(cfg, problem, numpy_result))
            == json.dumps(run_report_record(cfg, problem, numba_result)))
    plans = len(numpy_result.archive)
    print(f"run reports identical: {'yes' if same else 'NO'} ({plans} plans)")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
