"""Independent numeric check and reproducible random ensembles.

The oracle minimizes the covering objective directly (subgradient warm
start, then deep-cut ellipsoid iterations) and reports a certified
lower bound, so it never touches the tangent-subset algebra it checks.

Random instances draw only uniform doubles from the PCG64 permuted
congruential generator (numpy's ``PCG64``; a double is
``(next_uint64 >> 11) * 2**-53``), so the fixtures can be regenerated
anywhere that generator is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import DEFAULT_TOL, Ensemble
from .geometry import MAX_ITER, solve_covering


@dataclass(frozen=True)
class OracleResult:
    t: float
    s: tuple[float, float, float]
    iterations: int
    converged: bool
    lower_bound: float


def oracle_solve(ensemble: Ensemble, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> OracleResult:
    """Minimal trace by brute convex descent; reports instead of raising on non-convergence."""
    sol = solve_covering(ensemble.priors, ensemble.vectors, tol=tol, max_iter=max_iter, refine=False)
    return OracleResult(
        t=sol.t,
        s=tuple(float(c) for c in sol.s),
        iterations=sol.iterations,
        converged=sol.gap <= tol,
        lower_bound=sol.lower_bound,
    )


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _unit_vector(u1: float, u2: float) -> np.ndarray:
    z = 2.0 * u1 - 1.0
    phi = 2.0 * math.pi * u2
    rho = math.sqrt(max(0.0, 1.0 - z * z))
    return np.array([rho * math.cos(phi), rho * math.sin(phi), z])


def _priors(u: np.ndarray) -> np.ndarray:
    # exponential draws normalize to a uniform point of the simplex
    w = -np.log1p(-u)
    return w / w.sum()


def random_ensemble(seed: int, m: int, purity: str = "pure") -> Ensemble:
    """Deterministic random ensemble of `m` states.

    ``purity="pure"`` puts every Bloch vector on the surface
    (``|r_x| = p_x``); ``"mixed"`` scales it by a uniform factor.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    purity = purity.lower()
    if purity not in ("pure", "mixed"):
        raise ValueError(f"purity must be 'pure' or 'mixed', got {purity!r}")
    u = _generator(seed).random((m, 4))
    P = _priors(u[:, 0])
    R = np.array([_unit_vector(a, b) for a, b in u[:, 1:3]]) * P[:, None]
    if purity == "mixed":
        R *= u[:, 3:4]
    return Ensemble.from_arrays(P, R, labels=[f"x{i}" for i in range(m)])


def mirror_symmetric_triple(seed: int) -> Ensemble:
    """Two equiprobable pure states mirrored through the xz-plane, plus a pure third in that plane."""
    u = _generator(seed).random(4)
    q = 0.5 * (0.1 + 0.8 * u[0])  # prior of each mirrored state
    pc = 1.0 - 2.0 * q
    a = _unit_vector(u[1], u[2])
    c_angle = 2.0 * math.pi * u[3]
    c = np.array([math.cos(c_angle), 0.0, math.sin(c_angle)])
    R = np.array([a * q, a * np.array([1.0, -1.0, 1.0]) * q, c * pc])
    return Ensemble.from_arrays([q, q, pc], R, labels=["A", "B", "C"])
