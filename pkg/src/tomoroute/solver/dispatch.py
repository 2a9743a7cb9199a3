from __future__ import annotations

from ..costmodel import CostMatrix
from ..errors import InvalidArgumentError
from .core import Budget, SolveResult
from .exact import solve_brute_force, solve_held_karp
from .heuristic import solve_heuristic

AUTO_BRUTE_MAX = 8
AUTO_HELD_KARP_MAX = 18

_ALIASES = {
    "auto": "auto",
    "brute": "brute_force",
    "brute_force": "brute_force",
    "held-karp": "held_karp",
    "held_karp": "held_karp",
    "heuristic": "heuristic",
}


def solve(
    c: CostMatrix,
    method: str = "auto",
    seed: int = 0,
    budget: Budget | None = None,
    **heuristic_options,
) -> SolveResult:
    """Pick a solver by size unless ``method`` names one.

    ``auto`` uses brute force up to 8 nodes, Held-Karp up to 18 and the
    heuristic beyond.
    """
    try:
        m = _ALIASES[method]
    except KeyError:
        raise InvalidArgumentError(f"unknown method {method!r}") from None
    if m == "auto":
        if c.n <= AUTO_BRUTE_MAX:
            m = "brute_force"
        elif c.n <= AUTO_HELD_KARP_MAX:
            m = "held_karp"
        else:
            m = "heuristic"
    if m == "brute_force":
        return solve_brute_force(c)
    if m == "held_karp":
        return solve_held_karp(c)
    return solve_heuristic(c, seed, budget, **heuristic_options)
