"""Acceptance criteria; each test records one PASS/FAIL line in the summary."""

import math
import time

import numpy as np
import pytest

from conftest import SIX_STATE_TRAVEL, ONE_QUBIT_TOUR, TWO_QUBIT_TOUR, random_matrix
from tomoroute import (
    Budget,
    CostMatrix,
    Tour,
    cycle_cost,
    heat_matrix,
    max_angle_matrix,
    path_encoded_settings,
    six_state_settings,
    solve,
    solve_brute_force,
    solve_held_karp,
    solve_heuristic,
    speedup,
    three_base_settings,
)
from tomoroute.cli import random_study
from tomoroute.costmodel import HEAT_POWER_MODES
from tomoroute.solver import _kernels
from tomoroute.tsplibio import export_tsplib, import_tsplib

# frozen before any solver ran: cost of the reference 36-setting sequence
TWO_QUBIT_TOUR_COST = 1642.5
HEAT_FACTOR, HEAT_FACTOR_TOL = 1.59, 0.15
HEAT_REDUCTION, HEAT_REDUCTION_TOL = 0.3, 0.1


def _identity_speedup(c, result):
    return cycle_cost(c, Tour.identity(c.n)) / result.cost


def test_c01_single_qubit_reproduction(criterion):
    t0 = time.perf_counter()
    s = six_state_settings(1)
    c = max_angle_matrix(s)
    r = solve(c)
    rep = speedup(c, Tour.identity(6), r.tour)
    elapsed = time.perf_counter() - t0
    ok = (
        np.array_equal(c.entries, SIX_STATE_TRAVEL)
        and rep.baseline_cost == 292.5
        and r.cost == 225
        and r.optimal
        and abs(rep.speedup - 1.3) <= 1e-9
        and elapsed < 1.0
    )
    criterion("1 single-qubit six-state", ok,
              f"conv={rep.baseline_cost} opt={r.cost} s={rep.speedup:.10f} t={elapsed:.3f}s")


def test_c02_reference_single_qubit_tour(criterion):
    s = six_state_settings(1)
    c = max_angle_matrix(s)
    ref = cycle_cost(c, s.indices(ONE_QUBIT_TOUR))
    opt = solve_brute_force(c).cost
    criterion("2 reference 1-qubit tour is optimal", ref == opt == 225, f"reference={ref} opt={opt}")


def test_c03_two_qubit_oracle(criterion):
    t0 = time.perf_counter()
    s = six_state_settings(2)
    c = max_angle_matrix(s)
    oracle = cycle_cost(c, s.indices(TWO_QUBIT_TOUR))
    r = solve(c, seed=1)
    rng = np.random.default_rng(2024)
    agree = 0
    trials = 40
    for _ in range(trials):
        k = int(rng.integers(4, 9))
        idx = np.sort(rng.choice(c.n, size=k, replace=False))
        sub = CostMatrix.from_array(c.entries[np.ix_(idx, idx)], c.unit)
        agree += math.isclose(solve_brute_force(sub).cost, solve_held_karp(sub).cost, abs_tol=1e-9)
    elapsed = time.perf_counter() - t0
    ok = oracle == TWO_QUBIT_TOUR_COST and r.cost <= oracle and agree == trials and elapsed < 30
    criterion("3 two-qubit oracle", ok,
              f"oracle={oracle} solved={r.cost} bf/hk agree {agree}/{trials} t={elapsed:.1f}s")


def test_c04_three_base_already_optimal(criterion):
    c = max_angle_matrix(three_base_settings(1))
    r = solve(c)
    rep = speedup(c, Tour.identity(c.n), r.tour)
    criterion("4 three-base degeneracy", rep.reduction == 0 and r.optimal, f"reduction={rep.reduction}")


def test_c05_path_time_model(criterion):
    t0 = time.perf_counter()
    c1 = max_angle_matrix(path_encoded_settings(1))
    r1 = solve(c1)
    conv1 = cycle_cost(c1, Tour.identity(6))
    s1 = conv1 / r1.cost
    c2 = max_angle_matrix(path_encoded_settings(2))
    r2 = solve(c2, seed=1)
    s2 = _identity_speedup(c2, r2)
    elapsed = time.perf_counter() - t0
    ok = (
        math.isclose(conv1, 5 * math.pi, rel_tol=1e-12)
        and math.isclose(r1.cost, 3.5 * math.pi, rel_tol=1e-12)
        and abs(s1 - 1.4286) < 5e-5
        and abs(s2 - 1.80) <= 0.05
        and elapsed < 60
    )
    criterion("5 path-encoded time model", ok,
              f"conv={conv1 / math.pi:.4f}pi opt={r1.cost / math.pi:.4f}pi s1={s1:.4f} s2={s2:.4f} t={elapsed:.1f}s")


def test_c06_heat_model(criterion):
    s1 = path_encoded_settings(1)
    rows = {}
    for mode in HEAT_POWER_MODES:
        c = heat_matrix(s1, power=mode)
        r = solve(c)
        conv = cycle_cost(c, Tour.identity(c.n))
        rows[mode] = (conv / r.cost, conv - r.cost)

    def inside(mode):
        f, red = rows[mode]
        return abs(f - HEAT_FACTOR) <= HEAT_FACTOR_TOL and abs(red - HEAT_REDUCTION) <= HEAT_REDUCTION_TOL

    default_ok = inside("destination")
    variants_ok = [m for m in rows if inside(m)]
    c2 = heat_matrix(path_encoded_settings(2))
    r2 = solve_heuristic(c2, seed=1)
    f2 = _identity_speedup(c2, r2)
    ok = (default_ok or bool(variants_ok)) and f2 >= 1.5
    detail = " ".join(f"{m}:f={f:.3f},dE={red:.4f}J" for m, (f, red) in rows.items())
    criterion("6 heat model", ok,
              f"default inside={default_ok} variants inside={variants_ok} n2 factor={f2:.3f} | {detail}")


def test_c07_scaling(criterion):
    speedups = []
    for n in (1, 2, 3):
        c = max_angle_matrix(six_state_settings(n))
        method = "auto" if n < 3 else "heuristic"
        r = solve(c, method, seed=1, budget=Budget(max_seconds=300))
        speedups.append(_identity_speedup(c, r))
    increasing = all(a < b for a, b in zip(speedups, speedups[1:]))
    t0 = time.perf_counter()
    c5 = max_angle_matrix(six_state_settings(5))
    r5 = solve_heuristic(c5, seed=1, budget=Budget(max_seconds=1800))
    elapsed = time.perf_counter() - t0
    s5 = _identity_speedup(c5, r5)
    del c5
    ok = increasing and speedups[2] >= 1.9 and s5 > 1.9 and elapsed < 1800
    criterion("7 scaling behaviour", ok,
              "s(1..3)=" + ",".join(f"{v:.4f}" for v in speedups) + f" s5={s5:.4f} t5={elapsed:.0f}s")


def _no_improving_two_exchange(d, tour):
    t = np.asarray(tour)
    a, b = t, np.roll(t, -1)
    n = len(t)
    i, j = np.triu_indices(n, 2)
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    gain = d[a[i], b[i]] + d[a[j], b[j]] - d[a[i], a[j]] - d[b[i], b[j]]
    return not np.any(gain > 1e-9)


def test_c08_solver_properties(criterion):
    rng = np.random.default_rng(8)
    mismatches = below = 0
    two_opt_fail = 0
    for symmetric in (True, False):
        for _ in range(50):
            n = int(rng.integers(4, 9))
            c = CostMatrix.from_array(random_matrix(rng, n, symmetric))
            bf = solve_brute_force(c).cost
            hk = solve_held_karp(c).cost
            mismatches += bf != hk
            h = solve_heuristic(c, seed=int(rng.integers(1 << 30)), budget=Budget(max_restarts=2, perturbations=50))
            below += h.cost < bf - 1e-9
            if symmetric:
                d = np.ascontiguousarray(c.entries)
                nb = _kernels.neighbor_lists(d, min(n - 1, 12), False)
                start = rng.permutation(n).astype(np.int64)
                local = _kernels.local_optimum(d, d, start, nb, nb, True, 3, True)
                two_opt_fail += not _no_improving_two_exchange(d, local)
    ok = mismatches == 0 and below == 0 and two_opt_fail == 0
    criterion("8 solver correctness", ok,
              f"bf!=hk {mismatches}/100 heuristic<opt {below}/100 2-opt not local {two_opt_fail}/50")


def test_c09_tsplib_round_trip(criterion):
    rng = np.random.default_rng(9)
    failures = 0
    tests = [max_angle_matrix(six_state_settings(1))]
    for k in range(20):
        n = int(rng.integers(2, 15))
        tests.append(CostMatrix.from_array(random_matrix(rng, n, k % 2 == 0) / 2, "degrees"))
    for c in tests:
        back = import_tsplib(export_tsplib(c, "rt"))
        failures += not (np.array_equal(back.entries, c.entries) and back.symmetric == c.symmetric)
    scaled_bad = 0
    for k in range(6):
        n = int(rng.integers(4, 11))
        c = CostMatrix.from_array(random_matrix(rng, n, k % 2 == 0), "degrees")
        raw = import_tsplib(export_tsplib(c, "sc", 3).replace("SCALE=3", "SCALE=1"))
        scaled_bad += not math.isclose(solve_held_karp(raw).cost, 3 * solve_held_karp(c).cost, abs_tol=1e-9)
    criterion("9 TSPLIB round trip", failures == 0 and scaled_bad == 0,
              f"round-trip failures {failures}/{len(tests)} scaled-optimum failures {scaled_bad}/6")


def test_c10_random_study(criterion):
    rows, mean = random_study(2, 6, 10, 2024, (0.0, 180.0))
    criterion("10 random-angle study", len(rows) == 10 and mean > 1.5, f"mean speedup {mean:.4f} over {len(rows)} trials")
