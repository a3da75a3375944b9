"""Qubit operators in the Bloch parametrization.

A Hermitian 2x2 operator is stored as ``(p, r)`` with
``A = (p I + r . (sx, sy, sz)) / 2``, so ``p = Tr A`` and ``r = Tr(A sigma)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
IDENTITY = np.eye(2, dtype=complex)


class NonHermitianError(ValueError):
    pass


class InvalidEnsembleError(ValueError):
    pass


@dataclass(frozen=True)
class BlochOperator:
    """Hermitian qubit operator ``(p I + r . sigma) / 2``."""

    p: float
    r: tuple[float, float, float]

    def __post_init__(self):
        r = tuple(float(c) for c in np.asarray(self.r, dtype=float).reshape(3))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "r", r)
        if not (np.isfinite(self.p) and all(np.isfinite(r))):
            raise ValueError(f"non-finite Bloch operator components: {self.p}, {r}")

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.r)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.r))

    def __add__(self, other: BlochOperator) -> BlochOperator:
        return BlochOperator(self.p + other.p, self.vector + other.vector)

    def __sub__(self, other: BlochOperator) -> BlochOperator:
        return BlochOperator(self.p - other.p, self.vector - other.vector)

    def __mul__(self, scalar: float) -> BlochOperator:
        return BlochOperator(self.p * scalar, self.vector * scalar)

    __rmul__ = __mul__


def from_matrix(entries, tol: float = DEFAULT_TOL) -> BlochOperator:
    """Convert a Hermitian 2x2 matrix to its Bloch parametrization.

    Raises
    ------
    NonHermitianError
        If ``||A - A^H||`` exceeds `tol`.
    """
    a = np.asarray(entries, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if np.linalg.norm(a - a.conj().T) > tol:
        raise NonHermitianError(f"matrix is not Hermitian within {tol:g}: {a.tolist()}")
    p = (a[0, 0] + a[1, 1]).real
    r = (2 * a[0, 1].real, 2 * a[1, 0].imag, (a[0, 0] - a[1, 1]).real)
    return BlochOperator(p, r)


def to_matrix(op: BlochOperator) -> np.ndarray:
    return 0.5 * (op.p * IDENTITY + np.tensordot(op.vector, PAULI, axes=1))


def is_psd(op: BlochOperator, tol: float = DEFAULT_TOL) -> bool:
    return op.p >= -tol and op.norm <= op.p + tol


def loewner_geq(sigma: BlochOperator, rho: BlochOperator, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``sigma - rho`` is positive semi-definite within `tol`."""
    return is_psd(sigma - rho, tol)


@dataclass(frozen=True)
class Ensemble:
    """Labeled, weighted qubit states whose traces sum to one.

    Each operator is a sub-normalized state ``prior * density``; the
    trace of an operator is the prior of its label.
    """

    labels: tuple[str, ...]
    ops: tuple[BlochOperator, ...]
    tol: float = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        ops = tuple(self.ops)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "ops", ops)
        if not ops:
            raise InvalidEnsembleError("an ensemble needs at least one state")
        if len(labels) != len(ops):
            raise InvalidEnsembleError(f"{len(labels)} labels for {len(ops)} states")
        if len(set(labels)) != len(labels):
            raise InvalidEnsembleError(f"labels must be unique: {list(labels)}")
        for lab, op in zip(labels, ops):
            if not is_psd(op, self.tol):
                raise InvalidEnsembleError(
                    f"state {lab!r} is not positive semi-definite: p={op.p:.12g}, |r|={op.norm:.12g}"
                )
        total = sum(op.p for op in ops)
        if abs(total - 1.0) > max(self.tol, 1e-12 * len(ops)):
            raise InvalidEnsembleError(f"priors must sum to 1, got {total:.12g}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, BlochOperator]], tol: float = DEFAULT_TOL) -> Ensemble:
        pairs = list(pairs)
        return cls(tuple(lab for lab, _ in pairs), tuple(op for _, op in pairs), tol=tol)

    @classmethod
    def from_arrays(
        cls, priors: Sequence[float], vectors, labels: Sequence[str] | None = None, tol: float = DEFAULT_TOL
    ) -> Ensemble:
        vectors = np.asarray(vectors, dtype=float).reshape(-1, 3)
        if labels is None:
            labels = [chr(ord("A") + i) if len(priors) <= 26 else str(i) for i in range(len(priors))]
        ops = tuple(BlochOperator(p, r) for p, r in zip(priors, vectors))
        return cls(tuple(labels), ops, tol=tol)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(zip(self.labels, self.ops))

    def __getitem__(self, label: str) -> BlochOperator:
        return self.ops[self.labels.index(label)]

    @property
    def priors(self) -> np.ndarray:
        return np.array([op.p for op in self.ops])

    @property
    def vectors(self) -> np.ndarray:
        return np.array([op.r for op in self.ops]).reshape(-1, 3)

    def subset(self, indices: Sequence[int]) -> list[tuple[str, BlochOperator]]:
        return [(self.labels[i], self.ops[i]) for i in indices]

    def without(self, labels: Iterable[str]) -> Ensemble:
        """Drop states without renormalizing; the remaining traces may sum below one."""
        drop = set(labels)
        keep = [(lab, op) for lab, op in self if lab not in drop]
        return _unchecked_ensemble(keep, self.tol)


def _unchecked_ensemble(pairs, tol) -> Ensemble:
    # sub-ensembles keep the original priors, so their traces need not sum to one
    ens = object.__new__(Ensemble)
    object.__setattr__(ens, "labels", tuple(lab for lab, _ in pairs))
    object.__setattr__(ens, "ops", tuple(op for _, op in pairs))
    object.__setattr__(ens, "tol", tol)
    if not ens.ops:
        raise InvalidEnsembleError("an ensemble needs at least one state")
    return ens
