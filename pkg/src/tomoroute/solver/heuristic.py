"""Multi-start local search for instances beyond the exact solvers."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..costmodel import CostMatrix, cycle_cost
from ..errors import InvalidArgumentError
from . import _kernels
from .core import Budget, SolveResult, Tour

TOL = 1e-9
MAX_SEGMENT = 3
MAX_BLOCK = 30
DEFAULT_NEIGHBORS = 12
THREADS_ENV = "TOMOROUTE_THREADS"


def default_perturbations(n: int) -> int:
    return int(min(max(1000, 25 * n), 200_000))


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidArgumentError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _restart_plan(n: int, seed: int, restarts: int):
    ss = np.random.SeedSequence(seed)
    rng = np.random.default_rng(ss)
    starts = rng.choice(n, size=restarts - 1, replace=restarts - 1 > n).tolist() if restarts > 1 else []
    ils_seeds = ss.generate_state(restarts, dtype=np.uint32).tolist()
    # restart 0 is greedy-edge, the rest nearest-neighbor from sampled starts
    return [("greedy", None, ils_seeds[0])] + [("nn", s, ils_seeds[i + 1]) for i, s in enumerate(starts)]


def solve_heuristic(
    c: CostMatrix,
    seed: int = 0,
    budget: Budget | None = None,
    *,
    neighbors: int = DEFAULT_NEIGHBORS,
    threads: int | None = None,
) -> SolveResult:
    """Best of several constructed-and-improved tours.

    Each restart builds a tour (greedy edge first, then nearest neighbor
    from seeded start nodes), descends with 2-opt (symmetric costs only)
    and Or-opt moves of segments up to three long, then runs seeded
    block-swap perturbations.  Each result is polished with exhaustive
    2-opt/Or-opt sweeps.  The identity tour is kept as a fallback, so
    the returned cost never exceeds the conventional order's.

    Given the same matrix, seed and a budget without ``max_seconds`` the
    returned tour is identical across runs and thread counts.
    """
    t0 = time.perf_counter()
    budget = budget or Budget()
    n = c.n
    if n < 4:
        raise InvalidArgumentError("the heuristic needs at least 4 nodes; use an exact solver")
    d = np.ascontiguousarray(c.entries)
    sym = bool(c.symmetric)
    dt = d if sym else np.ascontiguousarray(d.T)
    k = max(1, min(n - 1, neighbors))
    nb_out = _kernels.neighbor_lists(d, k, False)
    nb_in = nb_out if sym else _kernels.neighbor_lists(d, k, True)
    kicks = default_perturbations(n) if budget.perturbations is None else budget.perturbations
    deadline = None if budget.max_seconds is None else t0 + budget.max_seconds
    chunk = max(1, min(kicks, max(200, kicks // 20)))
    plan = _restart_plan(n, seed, budget.max_restarts)

    def run(item):
        kind, start, ils_seed = item
        if deadline is not None and time.perf_counter() > deadline:
            return None
        if kind == "greedy":
            tour = _kernels.greedy_edge(d, nb_out, sym)
        else:
            tour = _kernels.nearest_neighbor(d, start)
        tour = _kernels.local_optimum(d, dt, tour, nb_out, nb_in, sym, MAX_SEGMENT, False)
        done = 0
        part = 0
        while done < kicks:
            if deadline is not None and time.perf_counter() > deadline:
                break
            step = min(chunk, kicks - done)
            tour = _kernels.perturb_local_search(
                d, tour, nb_out, nb_in, sym, MAX_SEGMENT, step, (ils_seed + part) % (2**32), MAX_BLOCK
            )
            done += step
            part += 1
        tour = _kernels.local_optimum(d, dt, tour, nb_out, nb_in, sym, MAX_SEGMENT, True)
        return tour, _kernels.tour_cost(d, tour), done

    workers = min(threads or thread_cap(), len(plan))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, plan))
    else:
        outcomes = [run(item) for item in plan]

    best_tour, best_cost, total = None, np.inf, 0
    # strict improvement keeps the lowest restart index on ties
    for out in outcomes:
        if out is None:
            continue
        tour, cost, done = out
        total += done
        if cost < best_cost - TOL:
            best_tour, best_cost = tour, cost
    identity = np.arange(n, dtype=np.int64)
    id_cost = _kernels.tour_cost(d, identity)
    if best_tour is None or best_cost > id_cost + TOL:
        polished = _kernels.local_optimum(d, dt, identity.copy(), nb_out, nb_in, sym, MAX_SEGMENT, True)
        best_tour = polished if _kernels.tour_cost(d, polished) <= id_cost else identity
    tour = Tour(tuple(best_tour.tolist())).canonical(sym)
    return SolveResult(tour, cycle_cost(c, tour), "heuristic", False, seed, time.perf_counter() - t0, total)
