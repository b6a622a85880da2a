"""Compiled search kernel and backend selection.

The entire search loop lives in one scalar kernel so it can be jit-compiled
into tight machine code. The kernel replays exactly the same random stream
and evaluation order as the numpy engine (the documented draw order lives in
`de_engine`), so both backends produce identical results; a parity test pins
that.

Backend choice comes from the ``DEFICIT_BACKEND`` environment variable, read
at call time:

* ``auto`` (default, also when unset): compiled kernel when numba imports,
  numpy otherwise.
* ``numba``: compiled kernel, or an error if numba is unavailable.
* ``numpy``: the pure-numpy engine, never importing numba.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import BackendError

ENV_VAR = "DEFICIT_BACKEND"

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_TWO_NEG53 = 2.0 ** -53
_INT64_MAX = 9223372036854775807


def _search_kernel(capacities, target, np_size, f, cr, quota, budget, penalty, seed):
    """One full search run; compiled by numba, never executed interpreted.

    Returns (evaluations, hits, hit_plans, generation_best, quota_reached).
    `hit_plans` holds every feasible plan in evaluation order, duplicates
    included; `generation_best` holds the best fitness after the initial
    population and after each (possibly partial) generation.
    """
    n = capacities.shape[0]
    caps = capacities.astype(np.float64)
    np_u = np.uint64(np_size)
    n_u = np.uint64(n)
    state = seed

    def nxt(s):
        s = s + _GAMMA
        z = s
        z = (z ^ (z >> _U30)) * _MIX1
        z = (z ^ (z >> _U27)) * _MIX2
        z = z ^ (z >> _U31)
        return s, z

    pop = np.empty((np_size, n), np.float64)
    for i in range(np_size):
        for j in range(n):
            state, z = nxt(state)
            pop[i, j] = np.float64(z >> _U11) * _TWO_NEG53

    max_hits = quota if quota < budget else budget
    rows = 64 if max_hits > 64 else max_hits
    hit_plans = np.zeros((rows, n), np.int64)
    max_passes = budget // np_size + 1
    gen_best = np.empty(max_passes, np.int64)

    pop_fit = np.empty(np_size, np.int64)
    sav = np.empty(n, np.int64)
    trial = np.empty(n, np.float64)

    evals = 0
    hits = 0
    stop = False
    best0 = _INT64_MAX
    for i in range(np_size):
        s_total = 0
        for j in range(n):
            sv = np.int64(np.ceil(caps[j] * pop[i, j]))
            sav[j] = sv
            s_total += sv
        if s_total <= target:
            fit = target - s_total
        else:
            fit = penalty * (s_total - target)
        pop_fit[i] = fit
        evals += 1
        if fit < best0:
            best0 = fit
        if fit == 0:
            if hits == hit_plans.shape[0]:
                grown = hit_plans.shape[0] * 2
                if grown > max_hits:
                    grown = max_hits
                tmp = np.zeros((grown, n), np.int64)
                tmp[:hits] = hit_plans[:hits]
                hit_plans = tmp
            for j in range(n):
                hit_plans[hits, j] = sav[j]
            hits += 1
            if hits >= quota:
                stop = True
                break
    gen_best[0] = best0
    g = 1

    while not stop and evals + np_size <= budget:
        for i in range(np_size):
            while True:
                state, z = nxt(state)
                r1 = np.int64(z % np_u)
                if r1 != i:
                    break
            while True:
                state, z = nxt(state)
                r2 = np.int64(z % np_u)
                if r2 != i and r2 != r1:
                    break
            while True:
                state, z = nxt(state)
                r3 = np.int64(z % np_u)
                if r3 != i and r3 != r1 and r3 != r2:
                    break
            state, z = nxt(state)
            j_rand = np.int64(z % n_u)

            s_total = 0
            for j in range(n):
                state, z = nxt(state)
                u = np.float64(z >> _U11) * _TWO_NEG53
                if u <= cr or j == j_rand:
                    v = pop[r1, j] + f * (pop[r2, j] - pop[r3, j])
                    if v < 0.0:
                        v = 0.0
                    elif v > 1.0:
                        v = 1.0
                else:
                    v = pop[i, j]
                trial[j] = v
                sv = np.int64(np.ceil(caps[j] * v))
                sav[j] = sv
                s_total += sv
            if s_total <= target:
                fit = target - s_total
            else:
                fit = penalty * (s_total - target)
            evals += 1
            if fit == 0:
                if hits == hit_plans.shape[0]:
                    grown = hit_plans.shape[0] * 2
                    if grown > max_hits:
                        grown = max_hits
                    tmp = np.zeros((grown, n), np.int64)
                    tmp[:hits] = hit_plans[:hits]
                    hit_plans = tmp
                for j in range(n):
                    hit_plans[hits, j] = sav[j]
                hits += 1
            if fit <= pop_fit[i]:
                for j in range(n):
                    pop[i, j] = trial[j]
                pop_fit[i] = fit
            if hits >= quota:
                stop = True
                break
        b = pop_fit[0]
        for k in range(1, np_size):
            if pop_fit[k] < b:
                b = pop_fit[k]
        gen_best[g] = b
        g += 1

    return evals, hits, hit_plans[:hits], gen_best[:g], hits >= quota


_dispatcher = None


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def requested_backend() -> str:
    raw = os.environ.get(ENV_VAR, "auto").strip().lower() or "auto"
    if raw not in ("auto", "numba", "numpy"):
        raise BackendError(
            f"{ENV_VAR} must be 'auto', 'numba' or 'numpy', got {raw!r}"
        )
    return raw


def active_backend() -> str:
    """Resolve the backend to use for the next run."""
    requested = requested_backend()
    if requested == "numpy":
        return "numpy"
    if requested == "numba":
        if not numba_available():
            raise BackendError(f"{ENV_VAR}=numba but numba is not importable")
        return "numba"
    return "numba" if numba_available() else "numpy"


def compiled_kernel():
    """The jit-compiled search kernel (compiled once, cached on disk)."""
    global _dispatcher
    if _dispatcher is None:
        import numba

        _dispatcher = numba.njit(cache=True)(_search_kernel)
    return _dispatcher
