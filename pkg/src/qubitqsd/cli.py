"""Command line entry point: ``qubitqsd --input problem.json``.

Exit codes: 0 success, 2 malformed input, 3 solver did not converge,
4 certificate failure or analytic/numeric disagreement.
"""

from __future__ import annotations

import argparse
import sys
import time

from .bloch import DEFAULT_TOL
from .cases import solve_ensemble
from .geometry import ConvergenceFailure
from .povm import InfeasibleWeights, classify, synthesize_povm, verify_certificate
from .report import METHODS, ProblemFileError, build_report, dumps, load_problem, render_text

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_CERTIFICATE = 0, 2, 3, 4
AGREEMENT_TOL = 1e-6


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qubitqsd", description="Optimal discrimination of qubit states.")
    parser.add_argument("--input", required=True, metavar="PATH", help="problem file (JSON)")
    parser.add_argument("--method", choices=METHODS, default=None,
                        help="solver path; 'both' cross-checks analytic against numeric (default: analytic)")
    parser.add_argument("--tol", type=float, default=None, help=f"tolerance (default {DEFAULT_TOL:g})")
    parser.add_argument("--json", action="store_true", help="print only the JSON report")
    parser.add_argument("--seed", type=int, default=0, 
                        help="seed for randomized paths (current solvers are deterministic; recorded in the report)")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        ensemble, settings = load_problem(args.input, args.tol)
    except (OSError, ProblemFileError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    tol = settings["tolerance"]
    method = args.method or str(settings.get("method", "analytic")).lower()
    if method not in METHODS:
        print(f"error: unknown method {method!r}", file=stderr)
        return EXIT_INPUT

    start = time.perf_counter()
    solver = {"method": method, "tolerance": tol, "seed": args.seed}
    try:
        primary = "numeric" if method == "numeric" else "analytic"
        result = solve_ensemble(ensemble, primary, tol)
        solver["iterations"] = result.iterations
        if method == "both":
            numeric = solve_ensemble(ensemble, "numeric", tol)
            diff = abs(result.t - numeric.t)
            solver["cross_check"] = {"numeric_p_guess": float(f"{numeric.t:.12g}"),
                                     "difference": float(f"{diff:.12g}"), "iterations": numeric.iterations}
            if diff > AGREEMENT_TOL:
                print(f"error: analytic {result.t:.12g} and numeric {numeric.t:.12g} disagree", file=stderr)
                return EXIT_CERTIFICATE
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONVERGENCE

    try:
        povm = synthesize_povm(result, ensemble)
    except InfeasibleWeights as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CERTIFICATE
    classes = classify(result, ensemble)
    certificate = verify_certificate(ensemble, result, povm, tol=tol)
    solver["wall_time_s"] = time.perf_counter() - start
    report = build_report(ensemble, result, povm, classes, certificate, solver)
    stdout.write(dumps(report) if args.json else render_text(report))
    if not certificate.passed:
        print("error: optimality certificate failed", file=stderr)
        return EXIT_CERTIFICATE
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
