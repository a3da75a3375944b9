"""Ball pictures of the minimal-trace problem and a numeric covering-ball solver.

For states ``(p_x, r_x)`` the Lagrange operator ``(t, s)`` minimizes
``t`` subject to ``|s - r_x| <= t - p_x``. Two equivalent pictures are
kept here:

* covering balls: ``t`` is the radius of the smallest ball around ``s``
  containing every ball ``(r_x, p_x)``;
* interior balls: on the slice ``p = max_x p_x`` each state becomes a
  ball ``(r_x, p - p_x)`` and ``(t, s)`` is the smallest ball
  ``(s, t - p)`` touching all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import DEFAULT_TOL, Ensemble

MAX_ITER = 100_000


class ConvergenceFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class Ball:
    center: tuple[float, float, float]
    radius: float

    def __post_init__(self):
        center = tuple(float(c) for c in np.asarray(self.center, dtype=float).reshape(3))
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius < 0 or not all(map(math.isfinite, center)) or not math.isfinite(self.radius):
            raise ValueError(f"invalid ball: center={center}, radius={self.radius}")

    def distance_to(self, other: Ball) -> float:
        return float(np.linalg.norm(np.subtract(self.center, other.center)))

    def intersects(self, other: Ball, tol: float = DEFAULT_TOL) -> bool:
        return self.distance_to(other) <= self.radius + other.radius + tol


@dataclass(frozen=True)
class ScaledProblem:
    p_max: float
    balls: tuple[tuple[str, Ball], ...]

    def __getitem__(self, label: str) -> Ball:
        return dict(self.balls)[label]


def scaled_balls(ensemble: Ensemble) -> ScaledProblem:
    p_max = float(ensemble.priors.max())
    balls = tuple((lab, Ball(op.r, abs(p_max - op.p))) for lab, op in ensemble)
    return ScaledProblem(p_max, balls)


def interior_ball(t: float, s, p_max: float) -> Ball:
    return Ball(s, max(t - p_max, 0.0))


def covering_objective(s, ensemble: Ensemble) -> float:
    """Smallest feasible trace ``max_x (p_x + |s - r_x|)`` for Bloch vector `s`."""
    return _objective(np.asarray(s, dtype=float), ensemble.priors, ensemble.vectors)


def _objective(s, P, R):
    return float(np.max(P + np.sqrt(((R - s) ** 2).sum(axis=1))))


def affine_basis(R: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal rows spanning the directions of the affine hull of the rows of `R`."""
    D = R[1:] - R[0]
    if len(D) == 0:
        return np.zeros((0, 3))
    _, sv, vt = np.linalg.svd(D)
    scale = max(sv[0] if len(sv) else 0.0, 1e-300)
    rank = int(np.sum(sv > rtol * max(scale, 1.0)))
    return vt[:rank]


def polish_equidistant(P, R, s, t, basis=None, iters=8):
    """Gauss-Newton refinement of ``p_x + |s - r_x| = t`` over all rows.

    `s` moves only inside the affine hull of the centers (or along
    `basis`). Returns the refined ``(s, t)`` and the max residual.
    """
    s = np.array(s, dtype=float)
    t = float(t)
    B = affine_basis(R) if basis is None else basis

    def residual(s, t):
        return P + np.sqrt(((R - s) ** 2).sum(axis=1)) - t

    g = residual(s, t)
    best = (s, t, float(np.max(np.abs(g))))
    for _ in range(iters):
        diff = s - R
        dist = np.sqrt((diff**2).sum(axis=1))
        if np.any(dist < 1e-14):
            break
        J = np.hstack([(diff / dist[:, None]) @ B.T, -np.ones((len(P), 1))])
        step, *_ = np.linalg.lstsq(J, -g, rcond=None)
        s_new = s + B.T @ step[:-1]
        t_new = t + step[-1]
        g_new = residual(s_new, t_new)
        err = float(np.max(np.abs(g_new)))
        if not err < best[2]:
            break
        s, t, g = s_new, t_new, g_new
        best = (s, t, err)
        if err <= 1e-15 * (1.0 + abs(t)):
            break
    return best


@dataclass
class CoveringSolution:
    t: float
    s: np.ndarray
    lower_bound: float
    iterations: int

    @property
    def gap(self) -> float:
        return self.t - self.lower_bound


def _subgradient_starts(P, R, steps):
    """Damped subgradient descent from every center and the centroid; best-of."""
    spread = float(np.max(np.linalg.norm(R - R.mean(axis=0), axis=1)))
    step0 = max(spread, 1e-3) / 2.0
    starts = list(R) + [R.mean(axis=0)]
    best_s, best_f, used = None, np.inf, 0
    for start in starts:
        s = np.array(start, dtype=float)
        for k in range(1, steps + 1):
            dist = np.sqrt(((R - s) ** 2).sum(axis=1))
            vals = P + dist
            i = int(np.argmax(vals))
            used += 1
            if vals[i] < best_f:
                best_s, best_f = s.copy(), float(vals[i])
            if dist[i] == 0.0:
                break
            s = s - step0 / math.sqrt(k) * (s - R[i]) / dist[i]
    return best_s, best_f, used


def _ellipsoid(P, R, center, radius, tol, max_iter):
    """Deep-cut ellipsoid method; returns best point, upper and certified lower bound."""
    n = 3
    Q = np.eye(n) * radius**2
    c = np.array(center, dtype=float)
    best_s, ub, lb = c.copy(), np.inf, -np.inf
    it = 0
    for it in range(1, max_iter + 1):
        diff = c - R
        dist = np.sqrt((diff**2).sum(axis=1))
        vals = P + dist
        i = int(np.argmax(vals))
        fc = float(vals[i])
        if fc < ub:
            ub, best_s = fc, c.copy()
        if dist[i] == 0.0:
            # zero is a subgradient: c is optimal
            lb = max(lb, fc)
            break
        g = diff[i] / dist[i]
        Qg = Q @ g
        gQg = float(g @ Qg)
        if not gQg > 0.0:
            break
        root = math.sqrt(gQg)
        lb = max(lb, fc - root)
        if ub - lb <= tol:
            break
        # deep cut: the optimum also satisfies g.(x - c) <= ub - fc
        alpha = (fc - ub) / root
        if alpha >= 1.0:
            break
        b = Qg / root
        c = c - (1.0 + n * alpha) / (n + 1) * b
        Q = (n * n * (1.0 - alpha * alpha) / (n * n - 1.0)) * (
            Q - (2.0 * (1.0 + n * alpha) / ((n + 1) * (1.0 + alpha))) * np.outer(b, b)
        )
        Q = 0.5 * (Q + Q.T)
    return best_s, ub, lb, it


def _refine_active(P, R, s, f):
    """Snap to the equidistant point of the nearly active centers."""
    best_s, best_f = s, f
    scale = max(float(np.max(np.abs(R))), float(np.max(P)), 1e-12)
    previous = None
    for delta in (1e-11, 1e-9, 1e-7, 1e-5, 1e-3):
        vals = P + np.sqrt(((R - s) ** 2).sum(axis=1))
        active = np.flatnonzero(vals >= f - delta * scale)
        key = tuple(active)
        if key == previous:
            continue
        previous = key
        s_new, _, _ = polish_equidistant(P[active], R[active], s, f)
        f_new = _objective(s_new, P, R)
        if f_new < best_f:
            best_s, best_f = s_new, f_new
    return best_s, best_f


def solve_covering(P, R, tol=DEFAULT_TOL, max_iter=MAX_ITER, refine=True, warm_steps=25) -> CoveringSolution:
    """Minimize ``max_x (p_x + |s - r_x|)`` with a certified optimality gap."""
    P = np.asarray(P, dtype=float)
    R = np.asarray(R, dtype=float).reshape(-1, 3)
    if len(P) == 1:
        return CoveringSolution(float(P[0]), R[0].copy(), float(P[0]), 0)
    s0, f0, used = _subgradient_starts(P, R, warm_steps)
    # the optimum lies in the convex hull of the centers
    radius = float(np.max(np.linalg.norm(R - s0, axis=1))) * (1.0 + 1e-9) + 1e-12
    s, ub, lb, it = _ellipsoid(P, R, s0, radius, tol, max(max_iter - used, 1))
    if f0 < ub:
        s, ub = s0, f0
    used += it
    if refine:
        s, ub = _refine_active(P, R, s, ub)
    lb = min(lb, ub)
    return CoveringSolution(float(ub), np.asarray(s, dtype=float), float(lb), used)


def min_covering_ball(ensemble: Ensemble, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER):
    """Lagrange operator ``(t, s)`` by direct minimization of the covering objective.

    Raises
    ------
    ConvergenceFailure
        If the certified gap is still above `tol` after `max_iter` iterations.
    """
    sol = solve_covering(ensemble.priors, ensemble.vectors, tol=tol, max_iter=max_iter)
    if sol.gap > tol:
        raise ConvergenceFailure(f"optimality gap {sol.gap:.3g} above {tol:g} after {sol.iterations} iterations")
    return sol.t, sol.s
