"""Optimal measurements from a Lagrange operator.

Every optimal element for a non-trivial problem is rank one,
``E = mu/2 (I + u . sigma)``, pointing from the Lagrange center ``s``
toward the center of a tangent state. Completeness ``sum E = I`` becomes
``sum mu = 2`` and ``sum mu u = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .bloch import BlochOperator, Ensemble, to_matrix

TANGENCY_TOL = 1e-7
WEIGHT_TOL = 1e-9


class StateClass(str, Enum):
    TRIVIAL_GUESS = "TrivialGuess"
    GUESSABLE = "Guessable"
    NEARLY_GUESSABLE = "NearlyGuessable"
    UNGUESSABLE = "Unguessable"

    def __str__(self) -> str:
        return self.value


class _FullKernel:
    """Marker: the Lagrange operator equals the state, the kernel is everything."""

    def __repr__(self) -> str:
        return "FULL_KERNEL"


FULL_KERNEL = _FullKernel()


class InfeasibleWeights(ValueError):
    pass


class IncompletePovm(ValueError):
    pass


@dataclass(frozen=True)
class PovmElement:
    label: str
    weight: float
    direction: tuple[float, float, float]

    @property
    def matrix(self) -> np.ndarray:
        return to_matrix(BlochOperator(self.weight, self.weight * np.asarray(self.direction)))


@dataclass(frozen=True)
class Povm:
    elements: tuple[PovmElement, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def completeness_residuals(self) -> tuple[float, float]:
        mu = np.array([e.weight for e in self.elements])
        U = np.array([e.direction for e in self.elements]).reshape(-1, 3)
        return abs(float(mu.sum()) - 2.0), float(np.linalg.norm(mu @ U))

    def weights(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for e in self.elements:
            out[e.label] = out.get(e.label, 0.0) + e.weight
        return out


def kernel_direction(lagrange, op: BlochOperator, tol: float = TANGENCY_TOL):
    """Direction of the kernel of ``sigma - rho``.

    Returns `FULL_KERNEL` when the Lagrange operator equals `op`, the unit
    vector ``(r - s)/|r - s|`` when the two are tangent, and None when
    ``sigma - rho`` has trivial kernel.
    """
    s = np.asarray(lagrange.s, dtype=float)
    diff = op.vector - s
    dist = float(np.linalg.norm(diff))
    slack = (lagrange.t - op.p) - dist
    if abs(lagrange.t - op.p) <= tol and dist <= tol:
        return FULL_KERNEL
    if abs(slack) <= tol and dist > tol:
        return diff / dist
    return None


def _system(U: np.ndarray):
    A = np.vstack([np.ones(len(U)), U.T])
    b = np.array([2.0, 0.0, 0.0, 0.0])
    return A, b


def basic_solutions(U, must_include: int | None = None, tol: float = WEIGHT_TOL) -> Iterator[np.ndarray]:
    """Nonnegative basic solutions of ``sum mu = 2, sum mu u = 0``.

    Supports are visited by size, then lexicographically, so the first
    solution yielded is the sparsest lexicographically-first one.
    """
    U = np.asarray(U, dtype=float).reshape(-1, 3)
    A, b = _system(U)
    n = len(U)
    for size in range(1, min(4, n) + 1):
        for support in combinations(range(n), size):
            if must_include is not None and must_include not in support:
                continue
            As = A[:, support]
            if np.linalg.matrix_rank(As, tol=1e-10) < size:
                continue
            mu_s, *_ = np.linalg.lstsq(As, b, rcond=None)
            if np.linalg.norm(As @ mu_s - b) > 1e-8 or np.any(mu_s < -tol):
                continue
            mu = np.zeros(n)
            mu[list(support)] = np.clip(mu_s, 0.0, None)
            yield mu


def solve_weights(directions: Sequence[tuple[str, Sequence[float]]]) -> np.ndarray:
    """Nonnegative weights making ``mu/2 (I + u . sigma)`` a complete measurement.

    Raises
    ------
    InfeasibleWeights
        If no nonnegative solution exists.
    """
    U = np.array([u for _, u in directions], dtype=float).reshape(-1, 3)
    for mu in basic_solutions(U):
        return mu
    raise InfeasibleWeights(f"no complete measurement along directions {U.tolist()}")


def max_weight(U, index: int) -> float:
    """Largest weight a complete measurement on directions `U` can put on `index`."""
    best = -1.0
    for mu in basic_solutions(U, must_include=index):
        best = max(best, float(mu[index]))
    if best < 0:
        if next(basic_solutions(U), None) is None:
            raise InfeasibleWeights("tangent directions admit no complete measurement")
        return 0.0
    return best


def classify(lagrange, ensemble: Ensemble, tol: float = TANGENCY_TOL) -> list[tuple[str, StateClass]]:
    kernels = [(lab, kernel_direction(lagrange, op, tol)) for lab, op in ensemble]
    if any(k is FULL_KERNEL for _, k in kernels):
        # the guessed state's element can absorb any rank-one element of a tangent state
        return [
            (lab, StateClass.TRIVIAL_GUESS if k is FULL_KERNEL
             else StateClass.UNGUESSABLE if k is None else StateClass.GUESSABLE)
            for lab, k in kernels
        ]
    tangent = [i for i, (_, k) in enumerate(kernels) if k is not None]
    U = np.array([kernels[i][1] for i in tangent]).reshape(-1, 3)
    out = []
    for i, (lab, k) in enumerate(kernels):
        if k is None:
            out.append((lab, StateClass.UNGUESSABLE))
        elif max_weight(U, tangent.index(i)) > WEIGHT_TOL:
            out.append((lab, StateClass.GUESSABLE))
        else:
            out.append((lab, StateClass.NEARLY_GUESSABLE))
    return out


def synthesize_povm(lagrange, ensemble: Ensemble, tol: float = TANGENCY_TOL) -> Povm:
    """One optimal measurement: identity split for the trivial case, else rank-one elements."""
    kernels = [(lab, kernel_direction(lagrange, op, tol)) for lab, op in ensemble]
    for lab, k in kernels:
        if k is FULL_KERNEL:
            return Povm((PovmElement(lab, 1.0, (0.0, 0.0, 1.0)), PovmElement(lab, 1.0, (0.0, 0.0, -1.0))))
    tangent = [(lab, k) for lab, k in kernels if k is not None]
    active = set(getattr(lagrange, "active_labels", ()) or ())
    preferred = [(lab, k) for lab, k in tangent if lab in active]
    for candidates in (preferred, tangent):
        if not candidates:
            continue
        try:
            mu = solve_weights(candidates)
        except InfeasibleWeights:
            continue
        return Povm(tuple(PovmElement(lab, float(w), tuple(u)) for (lab, u), w in zip(candidates, mu)))
    raise InfeasibleWeights("tangent states admit no complete measurement; the Lagrange operator is not optimal")


def guessing_probability(ensemble: Ensemble, povm: Povm, tol: float = 1e-8) -> float:
    """Success probability ``sum_x Tr(E^x rho_x)``.

    Raises
    ------
    IncompletePovm
        If the elements do not sum to the identity within `tol`.
    """
    d_trace, d_vec = povm.completeness_residuals()
    if max(d_trace, d_vec) > tol:
        raise IncompletePovm(f"elements do not sum to identity: |sum mu - 2|={d_trace:.3g}, |sum mu u|={d_vec:.3g}")
    total = 0.0
    for e in povm:
        op = ensemble[e.label]
        total += 0.5 * e.weight * (op.p + float(np.dot(e.direction, op.r)))
    return total


@dataclass(frozen=True)
class CertificateReport:
    feasibility: float
    completeness_trace: float
    completeness_vector: float
    slackness: float
    gap: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.feasibility, self.completeness_trace, self.completeness_vector,
                   self.slackness, self.gap) <= self.tol

    def as_dict(self) -> dict:
        return {
            "feasibility": self.feasibility,
            "completeness_trace": self.completeness_trace,
            "completeness_vector": self.completeness_vector,
            "slackness": self.slackness,
            "gap": self.gap,
            "tolerance": self.tol,
            "passed": self.passed,
        }


def verify_certificate(ensemble: Ensemble, lagrange, povm: Povm, tol: float = 1e-8) -> CertificateReport:
    """Check optimality conditions on 2x2 matrices, independently of the Bloch formulas."""
    sigma = to_matrix(BlochOperator(lagrange.t, lagrange.s))
    rhos = {lab: to_matrix(op) for lab, op in ensemble}
    feas = max(max(0.0, -float(np.linalg.eigvalsh(sigma - rho)[0])) for rho in rhos.values())
    total = sum((e.matrix for e in povm), np.zeros((2, 2), dtype=complex))
    d_trace = abs(float(np.trace(total).real) - 2.0)
    traceless = total - 0.5 * np.trace(total) * np.eye(2)
    # traceless part is (sum mu u).sigma / 2
    d_vec = 2.0 * float(np.linalg.norm(traceless, 2))
    slack = max((float(np.linalg.norm(e.matrix @ (sigma - rhos[e.label]), 2)) for e in povm), default=0.0)
    achieved = sum(float(np.trace(e.matrix @ rhos[e.label]).real) for e in povm)
    return CertificateReport(feas, d_trace, d_vec, slack, abs(achieved - lagrange.t), tol)
