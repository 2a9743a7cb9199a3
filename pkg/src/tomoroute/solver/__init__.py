"""Minimum-cost Hamiltonian cycles over cost matrices."""

from .core import Budget, SolveResult, Tour, nest_tours
from .exact import BRUTE_FORCE_CAP, HELD_KARP_CAP, solve_brute_force, solve_held_karp
from .heuristic import solve_heuristic
from .dispatch import solve

__all__ = [
    "BRUTE_FORCE_CAP",
    "HELD_KARP_CAP",
    "Budget",
    "SolveResult",
    "Tour",
    "nest_tours",
    "solve",
    "solve_brute_force",
    "solve_held_karp",
    "solve_heuristic",
]
