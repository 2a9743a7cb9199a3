"""Exact solvers for small instances."""

from __future__ import annotations

import itertools
import time

import numpy as np

from ..costmodel import CostMatrix, cycle_cost
from ..errors import SizeLimitError
from . import _kernels
from .core import SolveResult, Tour

BRUTE_FORCE_CAP = 10
HELD_KARP_CAP = 20
TOL = 1e-9
_CHUNK = 20000


def _trivial(c: CostMatrix, method: str, t0: float) -> SolveResult:
    tour = Tour(tuple(range(c.n)))
    return SolveResult(tour, cycle_cost(c, tour), method, True, None, time.perf_counter() - t0, 1)


def solve_brute_force(c: CostMatrix) -> SolveResult:
    """Enumerate every cycle through node 0 and keep the cheapest.

    Permutations are scanned in lexicographic order and only a strictly
    cheaper cycle (by more than 1e-9) replaces the incumbent, so the
    result is the lexicographically smallest optimal tour.  Mirror images
    are skipped for symmetric matrices.
    """
    t0 = time.perf_counter()
    n = c.n
    if n > BRUTE_FORCE_CAP:
        raise SizeLimitError(
            f"brute force is limited to {BRUTE_FORCE_CAP} nodes (got {n}); use held_karp or heuristic"
        )
    if n <= 2:
        return _trivial(c, "brute_force", t0)
    d = c.entries
    perms = itertools.permutations(range(1, n))
    if c.symmetric:
        perms = (p for p in perms if p[0] < p[-1])
    best_cost = np.inf
    best = None
    count = 0
    while True:
        block = np.array(list(itertools.islice(perms, _CHUNK)), dtype=np.int64)
        if block.size == 0:
            break
        count += len(block)
        costs = d[0, block[:, 0]] + d[block[:, -1], 0]
        for k in range(block.shape[1] - 1):
            costs += d[block[:, k], block[:, k + 1]]
        m = costs.min()
        if m < best_cost - TOL:
            idx = int(np.flatnonzero(costs <= m + TOL)[0])
            best_cost = float(costs[idx])
            best = (0,) + tuple(block[idx].tolist())
    tour = Tour(best)
    return SolveResult(tour, cycle_cost(c, tour), "brute_force", True, None, time.perf_counter() - t0, count)


def solve_held_karp(c: CostMatrix) -> SolveResult:
    """Subset dynamic program, exact for directed and undirected costs."""
    t0 = time.perf_counter()
    n = c.n
    if n > HELD_KARP_CAP:
        raise SizeLimitError(f"Held-Karp is limited to {HELD_KARP_CAP} nodes (got {n}); use heuristic")
    if n <= 2:
        return _trivial(c, "held_karp", t0)
    order, _ = _kernels.held_karp(np.ascontiguousarray(c.entries))
    tour = Tour(tuple(order.tolist()))
    return SolveResult(
        tour, cycle_cost(c, tour), "held_karp", True, None, time.perf_counter() - t0, (1 << (n - 1)) * (n - 1)
    )
