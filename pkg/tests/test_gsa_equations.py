"""Unit-level checks of the optimizer's arithmetic against hand-derived
values and an independent scalar-loop oracle."""

import math

import numpy as np
import pytest

from gravopt.errors import ConfigError, DimensionError, EvaluationError
from gravopt.gsa import (
    best_worst,
    compute_masses,
    gravitational_constant_linear,
    gravitational_constant_power,
    kbest_members,
    kbest_size,
    pairwise_force,
    step_kinematics,
    total_force,
)
from gravopt.space import CONTINUOUS, Dimension, SearchSpace


class PinnedRng:
    """Stands in for a Generator, returning a constant for every draw."""

    def __init__(self, value=1.0):
        self.value = value

    def random(self, shape=None):
        return np.full(shape, self.value) if shape else self.value


# --- gravitational constant schedules --------------------------------------

def test_linear_schedule_start_is_g0():
    assert gravitational_constant_linear(100.0, 0, 15) == 100.0


def test_linear_schedule_end_is_zero():
    assert gravitational_constant_linear(100.0, 15, 15) == 0.0


def test_linear_schedule_hand_value():
    # 100 * (1 - 5/15) = 200/3
    assert gravitational_constant_linear(100.0, 5, 15) == pytest.approx(200.0 / 3.0, abs=1e-12)


def test_linear_schedule_rejects_zero_horizon():
    with pytest.raises(ConfigError):
        gravitational_constant_linear(100.0, 0, 0)


def test_linear_schedule_strictly_decreasing():
    values = [gravitational_constant_linear(30.0, t, 50) for t in range(51)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] == 0.0


def test_power_schedule_identity_at_start():
    assert gravitational_constant_power(100.0, 1.0, 1.0, 0.5) == 100.0


def test_power_schedule_hand_value():
    # 100 * (1/4)^0.5 = 50
    assert gravitational_constant_power(100.0, 1.0, 4.0, 0.5) == pytest.approx(50.0, abs=1e-12)


def test_power_schedule_monotone():
    assert gravitational_constant_power(7.0, 2.0, 9.0, 0.3) < \
        gravitational_constant_power(7.0, 2.0, 4.0, 0.3)


def test_power_schedule_validates():
    with pytest.raises(ConfigError):
        gravitational_constant_power(100.0, 1.0, 2.0, 1.0)
    with pytest.raises(ConfigError):
        gravitational_constant_power(100.0, 0.0, 2.0, 0.5)
    with pytest.raises(ConfigError):
        gravitational_constant_power(100.0, 3.0, 2.0, 0.5)


# --- best/worst and masses ---------------------------------------------------

def test_best_worst_minimize():
    assert best_worst([3, 1, 2], "minimize") == (1.0, 3.0)


def test_best_worst_maximize():
    assert best_worst([3, 1, 2], "maximize") == (3.0, 1.0)


def test_best_worst_singleton():
    assert best_worst([5], "minimize") == (5.0, 5.0)


def test_best_worst_rejects_non_finite():
    with pytest.raises(EvaluationError):
        best_worst([1.0, float("nan")], "minimize")
    with pytest.raises(EvaluationError):
        best_worst([1.0, float("inf")], "minimize")


def test_masses_two_particles():
    assert compute_masses([1, 3], "minimize").tolist() == [1.0, 0.0]


def test_masses_degenerate_uniform():
    assert compute_masses([2, 2, 2], "minimize").tolist() == [1 / 3, 1 / 3, 1 / 3]


def test_masses_three_particles_hand_derived():
    # m = [1, 0.5, 0], normalized by 1.5
    out = compute_masses([1, 2, 3], "minimize")
    assert np.allclose(out, [2 / 3, 1 / 3, 0.0], atol=1e-12)


def test_masses_sum_to_one_randomized():
    rng = np.random.default_rng(0)
    for _ in range(300):
        n = rng.integers(2, 60)
        f = rng.normal(size=n) * rng.uniform(0.1, 1e4)
        m = compute_masses(f, "minimize")
        assert abs(m.sum() - 1.0) < 1e-12
        assert np.all(m >= 0)


def test_masses_ordering():
    rng = np.random.default_rng(1)
    f = rng.uniform(size=20)
    m = compute_masses(f, "minimize")
    assert np.argmax(m) == np.argmin(f)
    assert m[np.argmax(f)] == 0.0


# --- kbest -------------------------------------------------------------------

def test_kbest_size_endpoints():
    assert kbest_size(0, 15, 30, 1) == 30
    assert kbest_size(15, 15, 30, 1) == 1


def test_kbest_size_hand_value():
    # 30 - 29*5/15 = 20.33 -> 20
    assert kbest_size(5, 15, 30, 1) == 20


def test_kbest_size_clamped():
    assert kbest_size(0, 10, 5, 5) == 5
    for t in range(11):
        k = kbest_size(t, 10, 8, 3)
        assert 3 <= k <= 8


def test_kbest_members_orders_by_fitness_then_index():
    members = kbest_members([5.0, 1.0, 3.0, 1.0], 2, "minimize")
    assert members.tolist() == [1, 3]
    members = kbest_members([5.0, 1.0, 3.0, 1.0], 2, "maximize")
    assert members.tolist() == [0, 2]


# --- pairwise force ----------------------------------------------------------

def test_pairwise_force_hand_value():
    # 1 * (0.5*0.5)/(2 + tau) * (2 - 0) -> 0.25 as tau -> 0
    out = pairwise_force(1.0, 0.5, 0.5, [0.0], [2.0], 1e-15)
    assert out[0] == pytest.approx(0.25, abs=1e-12)


def test_pairwise_force_zero_displacement():
    out = pairwise_force(2.0, 0.5, 0.5, [1.0, 2.0], [1.0, 2.0], 1e-12)
    assert out.tolist() == [0.0, 0.0]


def test_pairwise_force_antisymmetric():
    rng = np.random.default_rng(2)
    for _ in range(200):
        d = rng.integers(1, 6)
        a, b = rng.normal(size=d), rng.normal(size=d)
        m = rng.uniform(0.01, 1.0)
        fab = pairwise_force(3.0, m, m, a, b, 1e-9)
        fba = pairwise_force(3.0, m, m, b, a, 1e-9)
        assert np.array_equal(fab, -fba)


def test_pairwise_force_scales_exactly_with_mass_product():
    # powers of two keep float scaling exact
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=4), rng.normal(size=4)
    base = pairwise_force(1.5, 0.25, 0.5, a, b, 1e-9)
    for c in (2.0, 4.0, 0.5):
        scaled = pairwise_force(1.5, 0.25 * c, 0.5, a, b, 1e-9)
        assert np.array_equal(scaled, c * base)


def test_pairwise_force_rejects_length_mismatch():
    with pytest.raises(DimensionError):
        pairwise_force(1.0, 0.5, 0.5, [0.0], [1.0, 2.0], 1e-9)


# --- total force -------------------------------------------------------------

def test_total_force_empty_cases():
    pos = np.array([[0.0, 1.0]])
    out = total_force(pos, [1.0], [1.0], 5.0, 1, 1e-12, np.random.default_rng(0))
    assert np.array_equal(out, np.zeros((1, 2)))
    pos2 = np.array([[0.0], [2.0]])
    out2 = total_force(pos2, [1.0, 2.0], [0.5, 0.5], 1.0, 0, 1e-12,
                       np.random.default_rng(0))
    assert np.array_equal(out2, np.zeros((2, 1)))


def test_total_force_reduces_to_pairwise_with_pinned_rng():
    pos = np.array([[0.0], [2.0]])
    out = total_force(pos, [1.0, 2.0], [0.5, 0.5], 1.0, 2, 1e-15, PinnedRng(1.0))
    assert out[0, 0] == pytest.approx(0.25, abs=1e-12)
    assert out[1, 0] == pytest.approx(-0.25, abs=1e-12)


def _oracle_forces(pos, masses, members, g, tau, rand):
    """Straightforward per-pair loop computed from the documented formula."""
    n, d = pos.shape
    forces = np.zeros((n, d))
    for i in range(n):
        for slot, j in enumerate(members):
            if j == i:
                continue
            dist = math.sqrt(sum((pos[j][a] - pos[i][a]) ** 2 for a in range(d)))
            for a in range(d):
                mag = g * masses[i] * masses[j] / (dist + tau)
                forces[i][a] += rand[i][slot][a] * mag * (pos[j][a] - pos[i][a])
    return forces


def test_total_force_matches_scalar_oracle():
    rng = np.random.default_rng(17)
    for _ in range(50):
        n, d = 3, 2
        pos = rng.normal(size=(n, d)) * 4
        fitness = rng.uniform(size=n)
        masses = compute_masses(fitness, "minimize")
        kbest = int(rng.integers(1, n + 1))
        members = kbest_members(fitness, kbest, "minimize")
        rand = np.random.default_rng(99).random((n, len(members), d))

        class ReplayRng:
            def random(self, shape):
                assert shape == rand.shape
                return rand.copy()

        got = total_force(pos, fitness, masses, 7.0, kbest, 1e-9, ReplayRng())
        want = _oracle_forces(pos, masses, members.tolist(), 7.0, 1e-9, rand)
        assert np.allclose(got, want, atol=1e-12)


# --- kinematics --------------------------------------------------------------

def _unit_box(d):
    return SearchSpace(tuple(Dimension(f"x{i}", CONTINUOUS, -10.0, 10.0) for i in range(d)))


def test_kinematics_zero_force_moves_by_velocity():
    space = _unit_box(2)
    pos = np.array([[1.0, 2.0]])
    vel = np.array([[0.5, -0.25]])
    step_kinematics(pos, vel, np.zeros((1, 2)), np.array([1.0]), 1e-12,
                    PinnedRng(1.0), space)
    assert pos.tolist() == [[1.5, 1.75]]
    assert vel.tolist() == [[0.5, -0.25]]


def test_kinematics_velocity_update_exact():
    space = _unit_box(1)
    pos = np.array([[0.0]])
    vel = np.array([[2.0]])
    forces = np.array([[3.0]])
    step_kinematics(pos, vel, forces, np.array([0.5]), 1e-12, PinnedRng(1.0), space)
    # u = 1*2 + 3/0.5 = 8
    assert vel.tolist() == [[8.0]]
    assert pos.tolist() == [[8.0]]


def test_kinematics_rest_state_is_fixed_point():
    space = _unit_box(3)
    pos = np.array([[0.1, 0.2, 0.3]])
    vel = np.zeros((1, 3))
    step_kinematics(pos, vel, np.zeros((1, 3)), np.array([1.0]), 1e-12,
                    PinnedRng(1.0), space)
    assert pos.tolist() == [[0.1, 0.2, 0.3]]


def test_kinematics_zero_mass_uses_tau_and_stays_finite():
    space = _unit_box(1)
    pos = np.array([[0.0]])
    vel = np.zeros((1, 1))
    forces = np.array([[1e-6]])
    step_kinematics(pos, vel, forces, np.array([0.0]), 1e-3, PinnedRng(1.0), space)
    assert np.isfinite(pos).all()
    assert pos[0, 0] == pytest.approx(1e-3, abs=1e-15)  # force/tau, clamped box is wide


def test_kinematics_clamps_to_bounds():
    space = _unit_box(1)
    pos = np.array([[9.0]])
    vel = np.array([[50.0]])
    step_kinematics(pos, vel, np.zeros((1, 1)), np.array([1.0]), 1e-12,
                    PinnedRng(1.0), space)
    assert pos[0, 0] == 10.0
    assert vel[0, 0] == 50.0  # velocity is not zeroed by the clamp
