from dataclasses import replace

import numpy as np
import pytest

from ensembles import NAMED, acute_triangle, dominated, helstrom, obtuse_triangle, right_triangle, trine
from qubitqsd import BlochOperator, Ensemble, Povm, PovmElement, StateClass, classify, guessing_probability
from qubitqsd import kernel_direction, oracle_solve, random_ensemble, solve_ensemble, solve_pair, solve_weights, synthesize_povm
from qubitqsd import to_matrix, verify_certificate
from qubitqsd.povm import FULL_KERNEL, IncompletePovm, InfeasibleWeights

G, N, U, T = StateClass.GUESSABLE, StateClass.NEARLY_GUESSABLE, StateClass.UNGUESSABLE, StateClass.TRIVIAL_GUESS


def test_kernel_direction_helstrom():
    ens = helstrom()
    res = solve_pair(*ens.ops)
    np.testing.assert_allclose(kernel_direction(res, ens["A"]), [-1 / np.sqrt(2), 0, 1 / np.sqrt(2)], atol=1e-12)
    # against the matrix kernel
    u = kernel_direction(res, ens["A"])
    proj = to_matrix(BlochOperator(1, u))
    diff = to_matrix(res.sigma) - to_matrix(ens["A"])
    assert np.linalg.norm(proj @ diff) < 1e-12


def test_kernel_direction_unguessable_and_trivial():
    ens = obtuse_triangle()
    assert kernel_direction(solve_ensemble(ens), ens["B"]) is None
    ens = dominated()
    assert kernel_direction(solve_ensemble(ens), ens["A"]) is FULL_KERNEL


@pytest.mark.parametrize(
    "dirs, expected",
    [
        ([(0, 0, 1), (0, 0, -1)], [1, 1]),
        ([(np.cos(a), np.sin(a), 0) for a in np.arange(3) * 2 * np.pi / 3], [2 / 3] * 3),
        ([(0, 0, 1), (1, 0, 0), (0, 0, -1)], [1, 0, 1]),
    ],
)
def test_solve_weights(dirs, expected):
    mu = solve_weights([(str(i), u) for i, u in enumerate(dirs)])
    np.testing.assert_allclose(mu, expected, atol=1e-12)


def test_solve_weights_infeasible():
    with pytest.raises(InfeasibleWeights):
        solve_weights([("a", (0, 0, 1)), ("b", (1, 0, 0))])


@pytest.mark.parametrize(
    "fixture, expected",
    [
        (acute_triangle, [G, G, G]),
        (right_triangle, [G, N, G]),
        (obtuse_triangle, [G, U, G]),
        (trine, [G, G, G]),
        (dominated, [T, U]),
    ],
)
def test_classify_fixtures(fixture, expected):
    ens = fixture()
    assert [c for _, c in classify(solve_ensemble(ens), ens)] == expected


def test_right_triangle_povm_forces_zero_on_b():
    ens = right_triangle()
    povm = synthesize_povm(solve_ensemble(ens), ens)
    assert povm.weights().get("B", 0.0) == pytest.approx(0.0, abs=1e-12)
    assert povm.weights()["A"] == pytest.approx(1.0)


def test_trivial_povm_is_identity_split():
    ens = dominated()
    povm = synthesize_povm(solve_ensemble(ens), ens)
    assert [e.label for e in povm] == ["A", "A"]
    total = sum(e.matrix for e in povm)
    np.testing.assert_allclose(total, np.eye(2), atol=1e-15)


@pytest.mark.parametrize(
    "fixture, expected",
    [(trine, 2 / 3), (helstrom, 0.5 + np.sqrt(2) / 4)],
)
def test_guessing_probability_optimal(fixture, expected):
    ens = fixture()
    povm = synthesize_povm(solve_ensemble(ens), ens)
    assert guessing_probability(ens, povm) == pytest.approx(expected, abs=1e-12)


def test_always_guess_a():
    for seed in range(10):
        ens = random_ensemble(seed, 4, "mixed")
        lab = ens.labels[0]
        povm = Povm((PovmElement(lab, 1, (0, 0, 1)), PovmElement(lab, 1, (0, 0, -1))))
        assert guessing_probability(ens, povm) == pytest.approx(ens[lab].p, abs=1e-15)


def test_incomplete_povm_rejected():
    povm = Povm((PovmElement("A", 1, (0, 0, 1)),))
    with pytest.raises(IncompletePovm):
        guessing_probability(helstrom(), povm)


def test_certificate_helstrom_and_perturbed():
    ens = helstrom()
    res = solve_ensemble(ens)
    povm = synthesize_povm(res, ens)
    report = verify_certificate(ens, res, povm)
    assert report.passed
    assert max(v for k, v in report.as_dict().items() if k not in ("passed", "tolerance")) <= 1e-10

    bumped = replace(res, s=tuple(np.add(res.s, (0.01, 0, 0))))
    report = verify_certificate(ens, bumped, povm)
    assert not report.passed
    assert max(report.feasibility, report.slackness) > 1e-3


def test_certificate_random_direction_povm_has_gap():
    ens = trine()
    rng = np.random.default_rng(3)
    u = rng.normal(size=3)
    u /= np.linalg.norm(u)
    povm = Povm((PovmElement("A", 1, tuple(u)), PovmElement("B", 1, tuple(-u))))
    report = verify_certificate(ens, solve_ensemble(ens), povm)
    assert report.gap > 0
    assert not report.passed


@pytest.mark.parametrize("name", sorted(NAMED))
def test_projector_algebra(name):
    ens = NAMED[name]()
    res = solve_ensemble(ens)
    sigma = to_matrix(res.sigma)
    for _, op in ens:
        u = kernel_direction(res, op)
        if u is None or u is FULL_KERNEL:
            continue
        proj = to_matrix(BlochOperator(1, u))
        np.testing.assert_allclose(proj @ proj, proj, atol=1e-10)
        assert np.linalg.norm(proj @ (sigma - to_matrix(op)), 2) < 1e-10


@pytest.mark.parametrize("m", [2, 3, 4, 6, 8])
def test_optimal_povm_and_weak_duality(m):
    for seed in range(20):
        ens = random_ensemble(seed + 50 * m, m, "mixed" if seed % 2 else "pure")
        res = solve_ensemble(ens)
        povm = synthesize_povm(res, ens)
        p = guessing_probability(ens, povm)
        assert p == pytest.approx(res.t, abs=1e-9)
        assert p <= oracle_solve(ens).t + 1e-9
        for e in povm:
            assert np.linalg.norm(e.direction) == pytest.approx(1.0, abs=1e-12)
            assert e.weight >= 0


@pytest.mark.parametrize("seed", range(20))
def test_classification_permutes_with_states(seed):
    ens = random_ensemble(seed, 5, "mixed")
    classes = dict(classify(solve_ensemble(ens), ens))
    order = np.random.default_rng(seed).permutation(len(ens))
    shuffled = Ensemble.from_pairs([ens.subset([i])[0] for i in order])
    assert dict(classify(solve_ensemble(shuffled), shuffled)) == classes


@pytest.mark.parametrize("fixture", [right_triangle, obtuse_triangle, dominated])
def test_removal_invariance_fixtures(fixture):
    ens = fixture()
    res = solve_ensemble(ens)
    drop = [lab for lab, c in classify(res, ens) if c in (N, U)]
    assert drop
    res2 = solve_ensemble(ens.without(drop))
    assert res2.t == pytest.approx(res.t, abs=1e-9)
    np.testing.assert_allclose(res2.s, res.s, atol=1e-9)
