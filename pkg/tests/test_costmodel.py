import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from conftest import SIX_STATE_TRAVEL, ONE_QUBIT_TOUR
from tomoroute import (
    CostMatrix,
    HeaterModel,
    InvalidArgumentError,
    MountModel,
    cycle_cost,
    heat_matrix,
    max_angle_matrix,
    path_encoded_settings,
    random_settings,
    six_state_settings,
    three_base_settings,
    to_temporal,
)
from tomoroute.costmodel import HEAT_POWER_MODES

PI = math.pi

# phases (theta, phi) of |0>, |1>, |+>, |->, |+i>, |-i>
PATH_PHASES = [(0, 0), (PI, 0), (PI / 2, 0), (-PI / 2, 0), (PI / 2, PI / 2), (PI / 2, -PI / 2)]


def heat_oracle(i, j, power=0.5, settle=1.0):
    """Scalar re-derivation for one transition of the single-qubit chip."""
    src, dst = PATH_PHASES[i], PATH_PHASES[j]
    watts = sum(power * (ph % (2 * PI)) / (2 * PI) for ph in dst)
    seconds = settle * max(abs(a - b) for a, b in zip(src, dst)) / (2 * PI)
    return watts * seconds


def test_reference_matrix_reproduced(six1_matrix):
    assert six1_matrix.n == 6
    assert six1_matrix.symmetric
    assert six1_matrix.unit == "degrees"
    assert np.array_equal(six1_matrix.entries, SIX_STATE_TRAVEL)


def test_named_entries(six1, six1_matrix):
    c = six1_matrix.entries
    i = six1.index
    assert c[i("H"), i("V")] == 45
    assert c[i("R"), i("L")] == 90
    assert c[i("A"), i("V")] == 67.5


def test_path_max_phase(path1):
    c = max_angle_matrix(path1)
    assert c.unit == "radians"
    assert c[path1.index("0"), path1.index("1")] == pytest.approx(PI, abs=1e-12)
    assert c[path1.index("-"), path1.index("1")] == pytest.approx(1.5 * PI, abs=1e-12)


@pytest.mark.parametrize("s", [six_state_settings(2), three_base_settings(2), path_encoded_settings(2)])
def test_zero_diagonal_and_symmetry(s):
    c = max_angle_matrix(s)
    assert np.all(np.diagonal(c.entries) == 0)
    assert np.array_equal(c.entries, c.entries.T)


def test_matrix_is_read_only(six1_matrix):
    with pytest.raises(ValueError):
        six1_matrix.entries[0, 1] = 3


@pytest.mark.parametrize(
    "entries,symmetric",
    [
        ([[1, 0], [0, 0]], False),
        ([[0, -1], [1, 0]], False),
        ([[0, 1], [2, 0]], True),
        ([[0, 1, 2]], False),
        ([[0, float("nan")], [1, 0]], False),
    ],
)
def test_cost_matrix_validation(entries, symmetric):
    with pytest.raises(InvalidArgumentError):
        CostMatrix(np.array(entries, dtype=float), symmetric, "degrees")


def test_cost_matrix_json_round_trip(six1_matrix):
    again = CostMatrix.from_json(six1_matrix.to_json())
    assert np.array_equal(again.entries, six1_matrix.entries)
    assert again.symmetric and again.unit == "degrees"
    assert set(six1_matrix.to_dict()) == {"n", "symmetric", "unit", "rows"}


def test_heat_matrix_against_scalar_oracle(path1):
    h = heat_matrix(path1)
    assert h.unit == "joules" and not h.symmetric
    for i in range(6):
        for j in range(6):
            expected = 0.0 if i == j else heat_oracle(i, j)
            assert h[i, j] == pytest.approx(expected, abs=1e-12)


def test_heat_examples(path1):
    h = heat_matrix(path1, HeaterModel())
    z, one = path1.index("0"), path1.index("1")
    assert h[z, one] == pytest.approx(0.125, abs=1e-12)
    assert h[one, z] == 0.0
    assert np.all(h.entries[:, z] == 0)
    assert h[z, one] != h[one, z]


def test_heat_scales_with_model_constants(path1):
    base = heat_matrix(path1).entries
    scaled = heat_matrix(path1, HeaterModel(1.0, 3.0)).entries
    assert np.allclose(scaled, 6 * base, atol=1e-12)


@pytest.mark.parametrize("mode", HEAT_POWER_MODES)
def test_heat_variants_invariants(path1, mode):
    h = heat_matrix(path1, power=mode)
    assert np.all(np.diagonal(h.entries) == 0)
    assert np.all(h.entries >= 0)


def test_heat_variant_relations(path1):
    dst = heat_matrix(path1, power="destination").entries
    src = heat_matrix(path1, power="source").entries
    assert np.allclose(src, dst.T)
    assert np.allclose(heat_matrix(path1, power="mean").entries, (src + dst) / 2)
    assert np.allclose(heat_matrix(path1, power="max").entries, np.maximum(src, dst))


def test_heat_requires_radians(six1):
    with pytest.raises(InvalidArgumentError):
        heat_matrix(six1)
    with pytest.raises(InvalidArgumentError):
        heat_matrix(path_encoded_settings(1), power="peak")


def test_heater_model_validation():
    with pytest.raises(InvalidArgumentError):
        HeaterModel(0, 1)
    with pytest.raises(InvalidArgumentError):
        MountModel(-1)


def test_cycle_cost_reference_values(six1, six1_matrix):
    assert cycle_cost(six1_matrix, range(6)) == 292.5
    assert cycle_cost(six1_matrix, six1.indices(ONE_QUBIT_TOUR)) == 225


def test_cycle_cost_two_nodes():
    c = CostMatrix(np.array([[0, 3.0], [5.0, 0]]), False, "seconds")
    assert cycle_cost(c, [0, 1]) == 8.0
    assert cycle_cost(c, [1, 0]) == 8.0


@pytest.mark.parametrize("bad", [[0, 1, 2, 3, 4], [0, 0, 1, 2, 3, 4], [0, 1, 2, 3, 4, 6], [0.0, 1, 2, 3, 4, 5]])
def test_cycle_cost_rejects_non_permutations(six1_matrix, bad):
    with pytest.raises(InvalidArgumentError):
        cycle_cost(six1_matrix, bad)


def test_to_temporal():
    assert to_temporal(292.5, MountModel(10.0)) == pytest.approx(29.25)
    assert to_temporal(225, MountModel()) == pytest.approx(22.5)
    assert to_temporal(0.0) == 0.0
    with pytest.raises(InvalidArgumentError):
        to_temporal(-1.0)


@hsettings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(2, 6), st.integers(0, 10**6))
def test_triangle_inequality(n, p, seed):
    c = max_angle_matrix(random_settings(n, p, seed)).entries
    via = c[:, :, None] + c[None, :, :]  # i -> j -> k
    assert np.all(c[:, None, :] <= via + 1e-9)


def test_triangle_inequality_generated_grids():
    for s in (six_state_settings(2), path_encoded_settings(2)):
        c = max_angle_matrix(s).entries
        assert np.all(c[:, None, :] <= c[:, :, None] + c[None, :, :] + 1e-9)


@hsettings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10**6), st.integers(0, 8), st.booleans())
def test_cycle_cost_rotation_and_reversal(n, seed, shift, symmetric):
    rng = np.random.default_rng(seed)
    m = rng.uniform(0, 5, (n, n))
    if symmetric:
        m = m + m.T
    np.fill_diagonal(m, 0)
    c = CostMatrix.from_array(m)
    t = rng.permutation(n)
    base = cycle_cost(c, t)
    assert cycle_cost(c, np.roll(t, shift)) == pytest.approx(base, abs=1e-9)
    if symmetric:
        assert cycle_cost(c, t[::-1]) == pytest.approx(base, abs=1e-9)
