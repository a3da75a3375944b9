import numpy as np
import pytest

from ensembles import helstrom, trine
from qubitqsd import BlochOperator, Ensemble, loewner_geq, mirror_symmetric_triple, oracle_solve, random_ensemble
from qubitqsd.oracle import _generator


@pytest.mark.parametrize("fixture, t", [(trine, 2 / 3), (helstrom, 0.5 + np.sqrt(2) / 4)])
def test_oracle_values(fixture, t):
    res = oracle_solve(fixture())
    assert res.converged
    assert res.t == pytest.approx(t, abs=1e-8)
    assert res.lower_bound <= res.t


def test_oracle_single_state():
    ens = Ensemble.from_arrays([1.0], [[0.1, 0.2, 0.3]])
    res = oracle_solve(ens)
    assert (res.t, res.s) == (1.0, (0.1, 0.2, 0.3))
    assert res.iterations <= 2


def test_oracle_reports_instead_of_raising():
    res = oracle_solve(random_ensemble(5, 8, "mixed"), tol=1e-15, max_iter=40)
    assert not res.converged


@pytest.mark.parametrize("seed", range(20))
def test_oracle_feasible(seed):
    ens = random_ensemble(seed, 6, "mixed")
    res = oracle_solve(ens)
    assert res.converged
    sigma = BlochOperator(res.t, res.s)
    assert all(loewner_geq(sigma, op) for _, op in ens)


def test_random_ensemble_deterministic():
    assert random_ensemble(7, 3, "pure") == random_ensemble(7, 3, "pure")


@pytest.mark.parametrize("purity", ["pure", "mixed"])
@pytest.mark.parametrize("m", [1, 2, 5, 9])
def test_random_ensemble_invariants(m, purity):
    for seed in range(20):
        ens = random_ensemble(seed, m, purity)
        assert len(ens) == m
        assert ens.priors.sum() == pytest.approx(1.0, abs=1e-12)
        norms = np.linalg.norm(ens.vectors, axis=1)
        if purity == "pure":
            np.testing.assert_allclose(norms, ens.priors, rtol=1e-12)
        else:
            assert np.all(norms <= ens.priors + 1e-15)


def test_random_ensemble_bad_arguments():
    with pytest.raises(ValueError):
        random_ensemble(0, 0)
    with pytest.raises(ValueError):
        random_ensemble(0, 3, "thermal")


def test_seed_isolation():
    seen = {tuple(random_ensemble(seed, 3, "mixed").vectors.ravel()) for seed in range(1000)}
    assert len(seen) == 1000


def test_generator_is_pcg64():
    # first double of PCG64(0), stable across numpy versions
    assert _generator(0).random() == np.random.Generator(np.random.PCG64(0)).random()
    assert isinstance(_generator(0).bit_generator, np.random.PCG64)


@pytest.mark.parametrize("seed", range(10))
def test_mirror_triple_shape(seed):
    ens = mirror_symmetric_triple(seed)
    a, b, c = ens.ops
    assert a.p == b.p
    np.testing.assert_allclose(np.multiply(a.r, (1, -1, 1)), b.r)
    assert c.r[1] == 0
    for op in ens.ops:
        assert op.norm == pytest.approx(op.p)
