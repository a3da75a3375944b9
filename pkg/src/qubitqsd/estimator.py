"""scikit-learn style front end."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .bloch import DEFAULT_TOL
from .cases import solve_ensemble
from .povm import TANGENCY_TOL, classify, synthesize_povm, verify_certificate
from .validation import as_ensemble, check_states


class QubitDiscriminator(BaseEstimator):
    """Optimal minimum-error measurement for a weighted set of qubit states.

    Parameters
    ----------
    method : {"analytic", "numeric"}
        Tangent-subset procedure or direct minimization of the covering
        objective.
    tol : float
        Feasibility tolerance of the solver.
    tangency_tol : float
        How close ``|s - r_x|`` must be to ``t - p_x`` for a state to count
        as tangent when building the measurement.

    Attributes
    ----------
    lagrange_ : LagrangeResult
    p_guess_ : float
    povm_ : Povm
    state_classes_ : dict
        Label to :class:`StateClass`.
    certificate_ : CertificateReport
    labels_ : tuple of str

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[0.5, 0, 0, 0.5], [0.5, 0.5, 0, 0]])
    >>> round(QubitDiscriminator().fit(X).p_guess_, 6)
    0.853553
    """

    def __init__(self, method="analytic", tol=DEFAULT_TOL, tangency_tol=TANGENCY_TOL):
        self.method = method
        self.tol = tol
        self.tangency_tol = tangency_tol

    def fit(self, X, y=None):
        """Solve for the Lagrange operator and one optimal measurement.

        `X` holds the weighted states, as ``(p, rx, ry, rz)`` rows or as
        2x2 operators; `y` optionally names them.
        """
        ensemble = as_ensemble(X, y, tol=self.tol)
        self.ensemble_ = ensemble
        self.labels_ = ensemble.labels
        self.lagrange_ = solve_ensemble(ensemble, method=self.method, tol=self.tol)
        self.p_guess_ = self.lagrange_.t
        self.povm_ = synthesize_povm(self.lagrange_, ensemble, self.tangency_tol)
        self.state_classes_ = dict(classify(self.lagrange_, ensemble, self.tangency_tol))
        self.certificate_ = verify_certificate(ensemble, self.lagrange_, self.povm_, tol=max(self.tol, 1e-8))
        return self

    def decision_function(self, X):
        """Margin ``t - p - |s - r|`` of each state under the fitted Lagrange operator.

        Nonnegative margins mean the state is already covered; adding it
        would not change the optimum. Zero means tangent.
        """
        check_is_fitted(self, "lagrange_")
        P, R = check_states(X, self.tol)
        s = np.asarray(self.lagrange_.s)
        return self.lagrange_.t - P - np.linalg.norm(R - s, axis=1)

    def score(self, X, y=None):
        """Success probability of the fitted measurement on states `X` labeled `y`.

        Elements whose label is missing from `y` never produce a correct guess.
        """
        check_is_fitted(self, "povm_")
        ensemble = as_ensemble(X, y if y is not None else self.labels_, tol=self.tol)
        known = set(ensemble.labels)
        total = 0.0
        for e in self.povm_:
            if e.label in known:
                op = ensemble[e.label]
                total += 0.5 * e.weight * (op.p + float(np.dot(e.direction, op.r)))
        return total

