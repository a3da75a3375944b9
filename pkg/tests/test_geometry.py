import numpy as np
import pytest

from ensembles import helstrom, trine
from qubitqsd import Ball, BlochOperator, ConvergenceFailure, Ensemble, covering_objective, loewner_geq, min_covering_ball
from qubitqsd import random_ensemble, scaled_balls
from qubitqsd.cases import pair_interior_unique
from qubitqsd.geometry import interior_ball, solve_covering


def test_scaled_balls_radii():
    ens = Ensemble.from_arrays([0.5, 0.3, 0.2], [[0, 0, 0.1], [0.1, 0, 0], [0, 0.1, 0]])
    problem = scaled_balls(ens)
    assert problem.p_max == 0.5
    np.testing.assert_allclose([b.radius for _, b in problem.balls], [0, 0.2, 0.3], atol=1e-15)


def test_scaled_balls_equiprobable_are_points():
    assert all(b.radius == 0 for _, b in scaled_balls(trine()).balls)
    single = Ensemble.from_arrays([1.0], [[0, 0, 0.5]])
    assert scaled_balls(single)["A"] == Ball((0, 0, 0.5), 0)


def test_ball_validation():
    with pytest.raises(ValueError):
        Ball((0, 0, 0), -1)
    with pytest.raises(ValueError):
        Ball((np.inf, 0, 0), 1)


@pytest.mark.parametrize(
    "ens, s, expected",
    [
        (trine(), (0, 0, 0), 2 / 3),
        (Ensemble.from_arrays([1.0], [[0.3, 0, 0.4]]), (0.3, 0, 0.4), 1.0),
        (helstrom(), (0.25, 0, 0.25), 0.5 + np.sqrt(2) / 4),
    ],
)
def test_covering_objective_examples(ens, s, expected):
    assert covering_objective(s, ens) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "ens, t, s",
    [
        (Ensemble.from_arrays([1.0], [[0.2, 0, 0.1]]), 1.0, (0.2, 0, 0.1)),
        (trine(), 2 / 3, (0, 0, 0)),
        (Ensemble.from_arrays([0.5, 0.5], [[0, 0, 0.5], [0, 0, -0.5]]), 1.0, (0, 0, 0)),
        (helstrom(), 0.5 + np.sqrt(2) / 4, (0.25, 0, 0.25)),
    ],
)
def test_min_covering_ball_examples(ens, t, s):
    t_got, s_got = min_covering_ball(ens)
    assert t_got == pytest.approx(t, abs=1e-9)
    np.testing.assert_allclose(s_got, s, atol=1e-6)


def test_convergence_failure_reported():
    ens = random_ensemble(3, 6, "mixed")
    with pytest.raises(ConvergenceFailure):
        min_covering_ball(ens, tol=1e-14, max_iter=30)


def test_objective_convex():
    rng = np.random.default_rng(4)
    for seed in range(50):
        ens = random_ensemble(seed, 5, "mixed")
        for _ in range(20):
            s1, s2 = rng.uniform(-1, 1, size=(2, 3))
            lam = rng.uniform()
            lhs = covering_objective(lam * s1 + (1 - lam) * s2, ens)
            rhs = lam * covering_objective(s1, ens) + (1 - lam) * covering_objective(s2, ens)
            assert lhs <= rhs + 1e-12


@pytest.mark.parametrize("seed", range(40))
def test_solution_feasible_and_optimal(seed):
    ens = random_ensemble(seed, 2 + seed % 7, "pure" if seed % 2 else "mixed")
    t, s = min_covering_ball(ens)
    sigma = BlochOperator(t, s)
    assert all(loewner_geq(sigma, op) for _, op in ens)
    assert max(ens.priors) - 1e-12 <= t <= 1 + 1e-12
    probes = np.random.default_rng(seed).normal(scale=0.3, size=(100, 3)) + s
    assert min(covering_objective(p, ens) for p in probes) >= t - 1e-9


@pytest.mark.parametrize("seed", range(20))
def test_interior_ball_meets_every_scaled_ball(seed):
    ens = random_ensemble(seed, 5, "mixed")
    t, s = min_covering_ball(ens)
    problem = scaled_balls(ens)
    ib = interior_ball(t, s, problem.p_max)
    assert all(ib.intersects(b, tol=1e-9) for _, b in problem.balls)


def test_certified_bound_brackets_value():
    for seed in range(30):
        ens = random_ensemble(seed, 8)
        sol = solve_covering(ens.priors, ens.vectors, refine=False)
        assert sol.lower_bound <= sol.t
        assert sol.gap <= 1e-9


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (Ball((0, 0, 0), 0), Ball((1, 0, 0), 0), True),
        (Ball((0, 0, 0), 0.2), Ball((0.1, 0, 0), 0.3), False),
        (Ball((0, 0, 0), 0.2), Ball((0.5, 0, 0), 0.3), True),
    ],
)
def test_pair_interior_unique(a, b, expected):
    assert pair_interior_unique(a, b) is expected
