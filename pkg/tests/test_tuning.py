import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helpers import interpolation_instance
from hrbfps.errors import ConditioningError, OptimizationError
from hrbfps.geometry import NodeSet, chebyshev_nodes
from hrbfps.kernels import KernelSpec
from hrbfps.operators import interpolation_matrix
from hrbfps.problems import PdeProblem, helmholtz2d, poisson1d, solve
from hrbfps.tuning import (
    PsoConfig,
    init_swarm,
    loocv_cost,
    optimize,
    particle_swarm,
    problem_loocv,
    pso_step,
    rms_objective,
    save_history_csv,
)


class FixedDraws:
    """Stand-in generator returning a constant for every uniform draw."""

    def __init__(self, value):
        self.value = value

    def random(self, shape):
        return np.full(shape, self.value)


def sphere(target):
    target = np.asarray(target)
    return lambda p: float(np.sum((p - target) ** 2))


# -- LOOCV ---------------------------------------------------------------------

def test_zero_data_costs_nothing():
    a = interpolation_matrix(KernelSpec.gaussian(2.0), chebyshev_nodes(6))
    assert loocv_cost(a, np.zeros(7)) == 0.0
    assert loocv_cost(a, np.zeros(7), "bruteforce") == 0.0


def test_rippa_matches_bruteforce_example():
    rng = np.random.default_rng(10)
    nodes = NodeSet(np.sort(rng.uniform(-1, 1, 10)))
    a = interpolation_matrix(KernelSpec.gaussian(2.0), nodes)
    y = rng.normal(size=10)
    brute = loocv_cost(a, y, "bruteforce")
    assert loocv_cost(a, y, "rippa") == pytest.approx(brute, rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rippa_identity_property(seed):
    inst = interpolation_instance(seed)
    assume(inst is not None)
    _, a, y = inst
    brute = loocv_cost(a, y, "bruteforce")
    assert abs(loocv_cost(a, y, "rippa") - brute) <= 1e-8 * brute


def test_columns_are_independent_data_sets():
    a = interpolation_matrix(KernelSpec.hybrid(1.0, 0.5, 0.5), chebyshev_nodes(8))
    y = np.random.default_rng(0).normal(size=(9, 3))
    cols = [loocv_cost(a, y[:, j]) for j in range(3)]
    assert loocv_cost(a, y) == pytest.approx(math.sqrt(sum(c * c for c in cols)), rel=1e-12)
    assert loocv_cost(a, y, "bruteforce") == pytest.approx(loocv_cost(a, y), rel=1e-8)


def test_zero_inverse_diagonal_raises():
    a = interpolation_matrix(KernelSpec.cubic(), NodeSet([0.0, 1.0]))
    with pytest.raises(ConditioningError):
        loocv_cost(a, [0.0, 1.0], "rippa")


def test_bruteforce_names_singular_subsystem():
    m = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.raises(ConditioningError) as info:
        loocv_cost(m, [1.0, 2.0, 3.0], "bruteforce")
    assert info.value.index == 2


def test_loocv_argument_errors():
    with pytest.raises(ValueError):
        loocv_cost(np.eye(3), np.ones(4))
    with pytest.raises(ValueError):
        loocv_cost(np.eye(3), np.ones(3), "kfold")


def test_problem_loocv_on_tensor_grid_uses_grid_lines():
    prob = helmholtz2d(6, variant="manufactured")
    spec = KernelSpec.hybrid(1.2, 0.8, 0.05)
    grid = prob.rhs().reshape(7, 7)
    a = interpolation_matrix(spec, chebyshev_nodes(6))
    expected = loocv_cost(a, np.hstack([grid, grid.T]))
    assert problem_loocv(prob, spec) == pytest.approx(expected, rel=1e-14)
    assert problem_loocv(prob, spec, "bruteforce") == pytest.approx(expected, rel=1e-8)


# -- RMS objective --------------------------------------------------------------

def test_rms_objective_zero_for_reproduced_solution():
    zero = lambda p: np.zeros(len(p))
    prob = PdeProblem("poisson1d", 8, chebyshev_nodes(8), zero, zero, exact=zero)
    assert rms_objective(prob, KernelSpec.hybrid(1.0, 0.5, 0.5)) == 0.0


def test_rms_objective_table_row():
    spec = KernelSpec.hybrid(1.3937, 0.6212, 0.1603)
    assert rms_objective(poisson1d(99), spec) <= 5.41e-4


def test_rms_objective_sentinel_for_singular_assembly():
    assert rms_objective(poisson1d(8), KernelSpec.gaussian(0.0)) == math.inf


def test_rms_objective_needs_exact_solution():
    with pytest.raises(ValueError, match="LOOCV"):
        rms_objective(helmholtz2d(4), KernelSpec.cubic())


# -- swarm ----------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        PsoConfig(c1=2.0, c2=2.0)
    with pytest.raises(ValueError):
        PsoConfig(c1=0.0, c2=0.0)
    with pytest.raises(ValueError):
        PsoConfig(bounds=((-1.0, 1.0), (0.0, 1.0), (0.0, 1.0)))
    with pytest.raises(ValueError):
        PsoConfig(bounds=((0.0, 1.0), (0.0, 2.0), (0.0, 1.0)))
    with pytest.raises(ValueError):
        PsoConfig(swarm_size=0)


def _state(cfg, fitness, seed=0):
    return init_swarm(cfg, fitness, np.random.default_rng(seed))


def test_zero_draws_give_pure_inertia_step():
    f = sphere([5.0, 0.5, 0.5])
    for w in (1.0, 0.5):
        cfg = PsoConfig(swarm_size=5, inertia=w)
        s = _state(cfg, f)
        s.velocities = np.full_like(s.velocities, 1e-3) * np.sign(0.5 - s.positions)
        nxt = pso_step(s, cfg, f, FixedDraws(0.0))
        np.testing.assert_array_equal(nxt.velocities, w * s.velocities)
        np.testing.assert_array_equal(nxt.positions, s.positions + w * s.velocities)


def test_particle_at_both_bests_keeps_velocity():
    f = sphere([5.0, 0.5, 0.5])
    cfg = PsoConfig(swarm_size=1, inertia=1.0)
    s = _state(cfg, f)
    s.velocities = np.array([[0.01, -0.01, 0.02]]) * np.sign(0.5 - s.positions)
    for draw in (0.0, 0.3, 0.999):
        nxt = pso_step(s, cfg, f, FixedDraws(draw))
        np.testing.assert_array_equal(nxt.velocities, s.velocities)


def test_clipping_zeroes_velocity_component():
    cfg = PsoConfig(swarm_size=1, inertia=1.0)
    f = sphere([5.0, 0.5, 0.5])
    s = _state(cfg, f)
    s.velocities = np.array([[0.0, 2.0, 0.0]])
    nxt = pso_step(s, cfg, f, FixedDraws(0.0))
    assert nxt.positions[0, 1] == 1.0
    assert nxt.velocities[0, 1] == 0.0


def test_nan_fitness_counts_as_infinite():
    cfg = PsoConfig(swarm_size=4, generations=3)
    calls = []

    def f(p):
        calls.append(p)
        return math.nan if len(calls) % 2 else float(p[0])

    s = _state(cfg, f)
    assert np.all(np.isinf(s.best_fitness[::2]))
    assert np.isfinite(s.global_fitness)


def test_all_infinite_initial_swarm():
    with pytest.raises(OptimizationError):
        particle_swarm(lambda p: math.inf, PsoConfig(swarm_size=3, generations=2))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 9.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_swarm_invariants(seed, eps, alpha, beta):
    target = (eps, alpha, beta)
    cfg = PsoConfig(swarm_size=10, generations=15, seed=seed)
    f = sphere(target)
    rng = np.random.default_rng(seed)
    s = init_swarm(cfg, f, rng)
    trajectory = [s.global_fitness]
    for _ in range(cfg.generations):
        s = pso_step(s, cfg, f, rng)
        assert np.all(s.positions >= cfg.lower) and np.all(s.positions <= cfg.upper)
        assert np.all(s.global_fitness <= s.best_fitness)
        trajectory.append(s.global_fitness)
    assert all(b <= a for a, b in zip(trajectory, trajectory[1:]))
    res = particle_swarm(f, cfg)
    assert res.fitness == trajectory[-1]
    np.testing.assert_array_equal(res.position, s.global_position)


def test_sphere_converges():
    target = np.array([2.0, 0.5, 0.3])
    res = particle_swarm(sphere(target), PsoConfig(seed=42))
    assert np.linalg.norm(res.position - target) <= 1e-4


def test_history_csv(tmp_path):
    res = particle_swarm(sphere([1.0, 0.2, 0.2]), PsoConfig(swarm_size=5, generations=4))
    path = tmp_path / "hist.csv"
    save_history_csv(path, res.history)
    lines = path.read_text().splitlines()
    assert lines[0] == "generation,best_fitness,epsilon,alpha,beta"
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    assert rows.shape == (5, 5)
    np.testing.assert_array_equal(rows[:, 0], np.arange(5))
    assert np.all(np.diff(rows[:, 1]) <= 0)


# -- optimize -------------------------------------------------------------------

@pytest.fixture(scope="module")
def poisson25_run():
    prob = poisson1d(24)
    return prob, optimize(prob, PsoConfig(seed=3), "rms")


def test_optimize_beats_fixed_baselines(poisson25_run):
    prob, (spec, fit, history) = poisson25_run
    assert spec.family == "hybrid"
    assert fit <= rms_objective(prob, KernelSpec.gaussian(1.0))
    assert fit <= rms_objective(prob, KernelSpec.cubic())
    assert fit == pytest.approx(solve(prob, spec, diagnostics=False).rms_error, rel=1e-12)
    assert len(history) == 41
    assert all(b[1] <= a[1] for a, b in zip(history, history[1:]))


def test_optimize_is_deterministic(poisson25_run):
    prob, first = poisson25_run
    second = optimize(prob, PsoConfig(seed=3), "rms")
    assert first[0] == second[0] and first[1] == second[1] and first[2] == second[2]


def test_optimize_loocv_without_exact_solution():
    prob = helmholtz2d(8)
    spec, fit, history = optimize(prob, PsoConfig(swarm_size=6, generations=3), "loocv")
    assert fit == pytest.approx(problem_loocv(prob, spec), rel=1e-12)
    with pytest.raises(ValueError):
        optimize(prob, PsoConfig(swarm_size=2, generations=1), "rms")
    with pytest.raises(ValueError):
        optimize(prob, PsoConfig(swarm_size=2, generations=1), "aic")


def test_unit_inertia_keeps_oscillating():
    # the bare update (inertia 1) does not settle within 40 generations
    target = np.array([2.0, 0.5, 0.3])
    res = particle_swarm(sphere(target), PsoConfig(seed=42, inertia=1.0))
    assert np.linalg.norm(res.position - target) > 1e-2
