"""Minimum-error discrimination of qubit states via the Bloch-ball picture.

The optimal guessing probability of an ensemble ``{p_x, rho_x}`` equals the
trace of the smallest operator ``sigma`` dominating every ``p_x rho_x``; in
Bloch coordinates that is the smallest ball containing every ball of center
``r_x`` and radius ``p_x``. This package finds that operator from tangent
subsets of at most four states, builds an optimal rank-one measurement,
classifies each state, and checks the result with a duality certificate.
"""

from .bloch import BlochOperator, Ensemble, InvalidEnsembleError, NonHermitianError, from_matrix, is_psd, loewner_geq, to_matrix
from .cases import (
    Case,
    DegenerateConfiguration,
    DegenerateError,
    InconsistentSolution,
    LagrangeResult,
    NoRealCandidate,
    solve_ensemble,
    solve_pair,
    solve_quadruple,
    solve_triplet,
    subset_traces,
)
from .estimator import QubitDiscriminator
from .geometry import Ball, ConvergenceFailure, covering_objective, min_covering_ball, scaled_balls
from .oracle import OracleResult, mirror_symmetric_triple, oracle_solve, random_ensemble
from .polyroots import real_roots, real_roots_cubic, real_roots_quartic
from .povm import (
    Povm,
    PovmElement,
    StateClass,
    classify,
    guessing_probability,
    kernel_direction,
    solve_weights,
    synthesize_povm,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Ball", "BlochOperator", "Case", "ConvergenceFailure", "DegenerateConfiguration", "DegenerateError",
    "Ensemble", "InconsistentSolution", "InvalidEnsembleError", "LagrangeResult", "NoRealCandidate",
    "NonHermitianError", "OracleResult", "Povm", "PovmElement", "QubitDiscriminator", "StateClass",
    "classify", "covering_objective", "from_matrix", "guessing_probability", "is_psd", "kernel_direction",
    "loewner_geq", "min_covering_ball", "mirror_symmetric_triple", "oracle_solve", "random_ensemble",
    "real_roots", "real_roots_cubic", "real_roots_quartic", "scaled_balls", "solve_ensemble", "solve_pair",
    "solve_quadruple", "solve_triplet", "solve_weights", "subset_traces", "synthesize_povm", "to_matrix",
    "verify_certificate",
]
