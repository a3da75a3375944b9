"""Input validation shared by the estimator and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .bloch import DEFAULT_TOL, Ensemble, from_matrix


def check_states(X, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Priors and Bloch vectors from either state encoding.

    `X` is an ``(m, 4)`` array of rows ``(p, rx, ry, rz)`` or an
    ``(m, 2, 2)`` stack of Hermitian operators (already weighted by prior).
    """
    arr = np.asarray(X)
    if arr.ndim == 3:
        if arr.shape[1:] != (2, 2):
            raise ValueError(f"operator stack must have shape (m, 2, 2), got {arr.shape}")
        ops = [from_matrix(a, tol) for a in arr]
        P = np.array([op.p for op in ops])
        R = np.array([op.r for op in ops]).reshape(-1, 3)
        return P, R
    arr = check_array(X, dtype=np.float64, ensure_min_samples=1)
    if arr.shape[1] != 4:
        raise ValueError(f"expected rows (p, rx, ry, rz), got {arr.shape[1]} columns")
    return arr[:, 0].copy(), arr[:, 1:].copy()


def check_labels(y, m: int) -> list[str]:
    if y is None:
        return [str(i) for i in range(m)]
    labels = [str(v) for v in np.asarray(y, dtype=object).ravel()]
    if len(labels) != m:
        raise ValueError(f"{len(labels)} labels for {m} states")
    return labels


def as_ensemble(X, y=None, tol: float = DEFAULT_TOL) -> Ensemble:
    if isinstance(X, Ensemble):
        return X
    P, R = check_states(X, tol)
    return Ensemble.from_arrays(P, R, labels=check_labels(y, len(P)), tol=tol)
