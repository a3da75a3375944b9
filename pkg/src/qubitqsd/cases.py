"""Analytical Lagrange operators for up to four states, and the subset sweep for more.

Small subsets are handled by growing the set of tangent states: a single
state that dominates the rest, then the pair of states whose ball covers
the others, then triplets, then quadruples. For a candidate subset all
states are tangent, ``p_x + |s - r_x| = t``. Subtracting the squared
conditions pairwise leaves linear equations in ``(s, t)``; what remains
is a single quadratic along the solution line, solved with
:func:`qubitqsd.polyroots.real_roots`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

from .bloch import DEFAULT_TOL, BlochOperator, Ensemble, loewner_geq
from .geometry import Ball, ConvergenceFailure, affine_basis, polish_equidistant, solve_covering
from .polyroots import real_roots
from .povm import TANGENCY_TOL, basic_solutions

CANDIDATE_TOL = 1e-7


class Case(str, Enum):
    TRIVIAL = "Trivial"
    PAIR = "Pair"
    TRIPLET = "Triplet"
    QUADRUPLE = "Quadruple"
    NUMERIC = "Numeric"

    def __str__(self) -> str:
        return self.value


CASE_BY_SIZE = {1: Case.TRIVIAL, 2: Case.PAIR, 3: Case.TRIPLET, 4: Case.QUADRUPLE}


class DegenerateError(ValueError):
    """One state of the pair dominates the other."""


class NoRealCandidate(ValueError):
    pass


class DegenerateConfiguration(ValueError):
    pass


class InconsistentSolution(RuntimeError):
    pass


@dataclass(frozen=True)
class LagrangeResult:
    t: float
    s: tuple[float, float, float]
    active_labels: tuple[str, ...]
    case: Case
    iterations: int = 0

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "s", tuple(float(c) for c in np.asarray(self.s).reshape(3)))
        object.__setattr__(self, "active_labels", tuple(self.active_labels))

    @property
    def sigma(self) -> BlochOperator:
        return BlochOperator(self.t, self.s)

    @property
    def p_guess(self) -> float:
        return self.t


def _labels_for(n, labels):
    return tuple(labels) if labels is not None else tuple("ABCD"[:n])


# --- single subsets -------------------------------------------------------


def case1_trivial(ensemble: Ensemble, tol: float = DEFAULT_TOL) -> LagrangeResult | None:
    """The state that Loewner-dominates every other one, if there is such a state."""
    for lab, op in ensemble:
        if all(loewner_geq(op, other, tol) for _, other in ensemble):
            return LagrangeResult(op.p, op.r, (lab,), Case.TRIVIAL)
    return None


def solve_pair(op_a: BlochOperator, op_b: BlochOperator, labels: Sequence[str] = ("A", "B"),
               tol: float = DEFAULT_TOL) -> LagrangeResult:
    """Lagrange operator of two states, neither of which dominates the other.

    ``t = (p_a + p_b + |r_a - r_b|) / 2`` and ``s`` is the midpoint of the
    gap between the two scaled balls.

    Raises
    ------
    DegenerateError
        If ``|r_a - r_b| <= |p_a - p_b| + tol``.
    """
    ra, rb = op_a.vector, op_b.vector
    d = float(np.linalg.norm(rb - ra))
    if d <= abs(op_a.p - op_b.p) + tol:
        raise DegenerateError(f"states {labels[0]!r} and {labels[1]!r}: one dominates the other")
    t = 0.5 * (op_a.p + op_b.p + d)
    s = ra + (t - op_a.p) * (rb - ra) / d
    return LagrangeResult(t, s, tuple(labels), Case.PAIR)


def pair_interior_unique(ball_a: Ball, ball_b: Ball, tol: float = DEFAULT_TOL) -> bool:
    """True iff the two scaled balls share at most one point."""
    return ball_a.distance_to(ball_b) >= ball_a.radius + ball_b.radius - tol


def _equidistant_candidates(P: np.ndarray, R: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """All ``(t, s)`` with ``p_x + |s - r_x| = t`` for every row, ``s`` in the hull plane.

    Sorted by ``t``. Works in coordinates centered on the largest-prior
    state, where every condition reads ``|s' - q_x| = tau - delta_x`` with
    ``tau = t - p_max >= 0`` and ``delta_x = p_x - p_max <= 0``.
    """
    a = int(np.argmax(P))
    others = [i for i in range(len(P)) if i != a]
    Q = R[others] - R[a]
    delta = P[others] - P[a]
    B = affine_basis(R)
    d = len(B)
    if d == 0:
        return [(float(P[a]), R[a].copy())] if np.allclose(P, P[a], atol=1e-15) else []
    M = np.hstack([2.0 * Q @ B.T, -2.0 * delta[:, None]])
    rhs = (Q**2).sum(axis=1) - delta**2
    _, sv, vt = np.linalg.svd(M)
    rank = int(np.sum(sv > 1e-12 * max(sv[0], 1.0)))
    z0, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    if np.linalg.norm(M @ z0 - rhs) > 1e-9 * (1.0 + np.linalg.norm(rhs)):
        return []
    null = vt[rank:]
    if len(null) == 0:
        points = [z0]
    elif len(null) == 1:
        n = null[0]
        w0, tau0, nw, ntau = z0[:-1], z0[-1], n[:-1], n[-1]
        # |w|^2 = tau^2 along z0 + lam n
        coeffs = [nw @ nw - ntau**2, 2.0 * (w0 @ nw - tau0 * ntau), w0 @ w0 - tau0**2]
        if max(abs(c) for c in coeffs) <= 1e-14:
            points = [z0 - (tau0 / ntau) * n] if abs(ntau) > 1e-12 else []
        else:
            points = [z0 + lam * n for lam, _ in real_roots(coeffs)]
    else:
        raise DegenerateConfiguration(f"equidistant locus has dimension {len(null)}")

    out = []
    for z in points:
        w, tau = z[:-1], z[-1]
        if tau < -1e-12 or abs(np.linalg.norm(w) - tau) > 1e-6:
            continue
        s, t, err = polish_equidistant(P, R, R[a] + B.T @ w, P[a] + tau, basis=B)
        if err <= CANDIDATE_TOL and t >= P[a] - 1e-12:
            out.append((float(t), s))
    out.sort(key=lambda c: c[0])
    return out


def _operators_arrays(ops):
    return np.array([op.p for op in ops], dtype=float), np.array([op.r for op in ops], dtype=float).reshape(-1, 3)


def solve_triplet(ops: Sequence[BlochOperator], labels: Sequence[str] | None = None,
                  tol: float = DEFAULT_TOL) -> LagrangeResult:
    """Ball tangent to all three states, minimal trace.

    Collinear centers have no three-way tangent point in general; the
    result then falls back to the best pair.

    Raises
    ------
    NoRealCandidate
        If no point is tangent to all three (the caller skipped the pair check).
    """
    labels = _labels_for(3, labels)
    P, R = _operators_arrays(ops)
    if len(affine_basis(R)) < 2:
        pairs = []
        for i, j in combinations(range(3), 2):
            try:
                pairs.append(solve_pair(ops[i], ops[j], (labels[i], labels[j]), tol))
            except DegenerateError:
                pass
        if not pairs:
            raise NoRealCandidate("collinear triplet with every pair dominated")
        return max(pairs, key=lambda r: r.t)
    cands = _equidistant_candidates(P, R)
    if not cands:
        raise NoRealCandidate(f"no point tangent to all of {labels}")
    t, s = cands[0]
    return LagrangeResult(t, s, labels, Case.TRIPLET)


def solve_quadruple(ops: Sequence[BlochOperator], labels: Sequence[str] | None = None,
                    tol: float = DEFAULT_TOL) -> LagrangeResult:
    """Ball tangent to all four states, minimal trace.

    Coplanar centers (e.g. BB84) are solved inside their plane, where the
    tangent locus is a line or a point rather than a finite set in space.

    Raises
    ------
    NoRealCandidate
        If no point is tangent to all four.
    DegenerateConfiguration
        If the centers span at most a line.
    """
    labels = _labels_for(4, labels)
    P, R = _operators_arrays(ops)
    if len(affine_basis(R)) < 2:
        raise DegenerateConfiguration(f"centers of {labels} are collinear")
    cands = _equidistant_candidates(P, R)
    if not cands:
        raise NoRealCandidate(f"no point tangent to all of {labels}")
    t, s = cands[0]
    return LagrangeResult(t, s, labels, Case.QUADRUPLE)


# --- nested procedure -----------------------------------------------------


class _SubsetSolver:
    """Memoized Lagrange operators of subsets with every member tangent."""

    def __init__(self, P, R, tol):
        self.P, self.R, self.tol = P, R, tol
        self._cache: dict[tuple[int, ...], tuple[float, np.ndarray] | None] = {}
        self._all: dict[tuple[int, ...], list] = {}
        self._masks: dict[tuple[int, ...], np.ndarray | None] = {}

    def equidistant(self, idx):
        if idx not in self._all:
            if len(idx) == 1:
                self._all[idx] = [(float(self.P[idx[0]]), self.R[idx[0]].copy())]
            else:
                try:
                    self._all[idx] = _equidistant_candidates(self.P[list(idx)], self.R[list(idx)])
                except DegenerateConfiguration:
                    self._all[idx] = []
        return self._all[idx]

    def certified(self, idx):
        """The subset's own Lagrange operator if all its members are needed, else None."""
        if idx in self._cache:
            return self._cache[idx]
        found = None
        if len(idx) == 1:
            found = self.equidistant(idx)[0]
        elif len(idx) == 2:
            i, j = idx
            d = float(np.linalg.norm(self.R[j] - self.R[i]))
            if d > abs(self.P[i] - self.P[j]) + self.tol:
                t = 0.5 * (self.P[i] + self.P[j] + d)
                found = (t, self.R[i] + (t - self.P[i]) * (self.R[j] - self.R[i]) / d)
        else:
            for t, s in self.equidistant(idx):
                diff = self.R[list(idx)] - s
                dist = np.linalg.norm(diff, axis=1)
                if np.any(dist <= self.tol):
                    continue
                # optimal for the subset iff a complete measurement exists on the tangent directions
                if next(basic_solutions(diff / dist[:, None]), None) is not None:
                    found = (t, s)
                    break
        self._cache[idx] = found
        return found

    def covers(self, t, s, idx) -> bool:
        idx = list(idx)
        slack = (t - self.P[idx]) - np.linalg.norm(self.R[idx] - s, axis=1)
        return bool(np.all(slack >= -self.tol))

    def _feasible_mask(self, idx):
        # which states the subset's certified ball covers; shared by every group
        if idx not in self._masks:
            cand = self.certified(idx)
            if cand is None:
                self._masks[idx] = None
            else:
                t, s = cand
                self._masks[idx] = (t - self.P) - np.linalg.norm(self.R - s, axis=1) >= -self.tol
        return self._masks[idx]

    def solve(self, group: tuple[int, ...]):
        """Nested procedure on `group`: smallest tangent subset whose ball covers the rest."""
        members = list(group)
        for k in range(1, min(4, len(group)) + 1):
            for sub in combinations(group, k):
                mask = self._feasible_mask(sub)
                if mask is not None and mask[members].all():
                    t, s = self._cache[sub]
                    return t, s, sub, CASE_BY_SIZE[k]
        # tolerance corner cases: any covering tangent point has t >= optimum,
        # and the optimum's own tangent subset is among the candidates
        best = None
        for k in range(1, min(4, len(group)) + 1):
            for sub in combinations(group, k):
                for t, s in self.equidistant(sub):
                    if self.covers(t, s, group) and (best is None or t < best[0] - self.tol):
                        best = (t, s, sub, CASE_BY_SIZE[k])
        if best is not None:
            return best
        sol = solve_covering(self.P[list(group)], self.R[list(group)], tol=self.tol)
        return sol.t, sol.s, group, Case.NUMERIC


def _result(solver_out, labels) -> LagrangeResult:
    t, s, sub, case = solver_out
    return LagrangeResult(t, s, tuple(labels[i] for i in sub), case)


def solve_four(ensemble: Ensemble, tol: float = DEFAULT_TOL) -> LagrangeResult:
    if not 1 <= len(ensemble) <= 4:
        raise ValueError(f"solve_four takes 1 to 4 states, got {len(ensemble)}")
    solver = _SubsetSolver(ensemble.priors, ensemble.vectors, tol)
    return _result(solver.solve(tuple(range(len(ensemble)))), ensemble.labels)


def tangent_labels(ensemble: Ensemble, t: float, s, tol: float = TANGENCY_TOL) -> tuple[str, ...]:
    s = np.asarray(s, dtype=float)
    return tuple(lab for lab, op in ensemble if abs((t - op.p) - np.linalg.norm(op.vector - s)) <= tol)


def subset_traces(ensemble: Ensemble, tol: float = DEFAULT_TOL) -> dict[tuple[str, ...], float]:
    """Lagrange trace of every 4-subset (every subset, for four states or fewer)."""
    solver = _SubsetSolver(ensemble.priors, ensemble.vectors, tol)
    size = min(4, len(ensemble))
    return {
        tuple(ensemble.labels[i] for i in group): float(solver.solve(group)[0])
        for group in combinations(range(len(ensemble)), size)
    }


def solve_ensemble(ensemble: Ensemble, method: str = "analytic", tol: float = DEFAULT_TOL) -> LagrangeResult:
    """Lagrange operator of the whole ensemble.

    ``method="analytic"`` runs the nested procedure directly for up to
    four states and otherwise keeps the largest-trace Lagrange operator
    among all 4-subsets that is feasible for every state.
    ``method="numeric"`` minimizes the covering objective.

    Raises
    ------
    ConvergenceFailure
        Numeric path only.
    InconsistentSolution
        If two 4-subsets tie on trace but disagree on the Bloch vector.
    """
    method = str(method).lower()
    if method == "numeric":
        sol = solve_covering(ensemble.priors, ensemble.vectors, tol=tol)
        if sol.gap > tol:
            raise ConvergenceFailure(f"optimality gap {sol.gap:.3g} above {tol:g} after {sol.iterations} iterations")
        return LagrangeResult(sol.t, sol.s, tangent_labels(ensemble, sol.t, sol.s), Case.NUMERIC, sol.iterations)
    if method != "analytic":
        raise ValueError(f"unknown method {method!r}")
    if len(ensemble) <= 4:
        return solve_four(ensemble, tol)

    solver = _SubsetSolver(ensemble.priors, ensemble.vectors, tol)
    everyone = tuple(range(len(ensemble)))
    winners = []
    for group in combinations(everyone, 4):
        out = solver.solve(group)
        if solver.covers(out[0], out[1], everyone):
            winners.append(out)
    if not winners:
        raise InconsistentSolution("no 4-subset Lagrange operator is feasible for the whole ensemble")
    t_max = max(w[0] for w in winners)
    tied = [w for w in winners if w[0] >= t_max - tol]
    s_tol = max(1e-6, 10.0 * math.sqrt(tol))
    for w in tied[1:]:
        if np.linalg.norm(np.asarray(w[1]) - tied[0][1]) > s_tol:
            raise InconsistentSolution(
                f"subsets {tied[0][2]} and {w[2]} tie at t={t_max:.12g} with different Bloch vectors"
            )
    return _result(tied[0], ensemble.labels)
