"""Problem files in, reports out.

Problem file (JSON)::

    {
      "settings": {"tolerance": 1e-9, "method": "analytic"},   # optional
      "states": [
        {"label": "A", "p": 0.5, "r": [0, 0, 0.5]},
        ...
      ]
    }

or, with every state given as a prior and a density matrix::

      "states": [{"label": "A", "prior": 0.5, "matrix": [[1, 0], [0, 0]]}, ...]

Matrix entries are numbers, ``[re, im]`` pairs or strings such as
``"0.5-0.5j"``. The two encodings cannot be mixed in one file.

Reports are JSON documents with ``schema`` set to :data:`REPORT_SCHEMA`;
floats carry 12 significant digits.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .bloch import DEFAULT_TOL, BlochOperator, Ensemble, InvalidEnsembleError, NonHermitianError, from_matrix, is_psd

REPORT_SCHEMA = "qubitqsd.report/1"
METHODS = ("analytic", "numeric", "both")


class ProblemFileError(ValueError):
    pass


def _complex(entry) -> complex:
    if isinstance(entry, (list, tuple)):
        if len(entry) != 2:
            raise ProblemFileError(f"complex entry must be [re, im], got {entry!r}")
        return complex(float(entry[0]), float(entry[1]))
    if isinstance(entry, str):
        return complex(entry.replace(" ", "").replace("i", "j"))
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    raise ProblemFileError(f"cannot read matrix entry {entry!r}")


def _state_from_matrix(state: dict, tol: float) -> BlochOperator:
    try:
        prior = float(state["prior"])
        m = np.array([[_complex(v) for v in row] for row in state["matrix"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFileError(f"state {state.get('label')!r}: {exc}") from exc
    if m.shape != (2, 2):
        raise ProblemFileError(f"state {state.get('label')!r}: matrix must be 2x2")
    try:
        rho = from_matrix(m, tol)
    except NonHermitianError as exc:
        raise ProblemFileError(f"state {state.get('label')!r}: {exc}") from exc
    if abs(rho.p - 1.0) > max(tol, 1e-12) or not is_psd(rho, tol):
        raise ProblemFileError(
            f"state {state.get('label')!r}: matrix must be a density matrix (unit trace, positive semi-definite)"
        )
    return prior * rho


def _state_from_bloch(state: dict) -> BlochOperator:
    try:
        r = [float(v) for v in state["r"]]
        if len(r) != 3:
            raise ValueError("r must have three components")
        return BlochOperator(float(state["p"]), r)
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFileError(f"state {state.get('label')!r}: {exc}") from exc


def parse_problem(data: dict[str, Any], tol: float | None = None) -> tuple[Ensemble, dict]:
    """Validated ensemble and settings from a decoded problem file."""
    if not isinstance(data, dict) or not isinstance(data.get("states"), list):
        raise ProblemFileError("problem file needs a 'states' list")
    settings = dict(data.get("settings") or {})
    if tol is None:
        tol = float(settings.get("tolerance", DEFAULT_TOL))
    states = data["states"]
    if not states:
        raise ProblemFileError("at least one state is required")
    kinds = {("matrix" in st) for st in states if isinstance(st, dict)}
    if len(kinds) != 1 or not all(isinstance(st, dict) for st in states):
        raise ProblemFileError("states must all use {prior, matrix} or all use {p, r}")
    use_matrix = kinds.pop()
    labels, ops = [], []
    for i, st in enumerate(states):
        labels.append(str(st.get("label", i)))
        ops.append(_state_from_matrix(st, tol) if use_matrix else _state_from_bloch(st))
    try:
        ensemble = Ensemble(tuple(labels), tuple(ops), tol=tol)
    except InvalidEnsembleError as exc:
        raise ProblemFileError(str(exc)) from exc
    settings["tolerance"] = tol
    return ensemble, settings


def load_problem(path, tol: float | None = None) -> tuple[Ensemble, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: not valid JSON ({exc})") from exc
    return parse_problem(data, tol)


def _num(x) -> float:
    return float(f"{float(x):.12g}")


def _vec(v) -> list[float]:
    return [_num(c) for c in v]


def build_report(ensemble, lagrange, povm, classes, certificate, solver: dict) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "p_guess": _num(lagrange.t),
        "sigma": {"t": _num(lagrange.t), "s": _vec(lagrange.s)},
        "case": str(lagrange.case),
        "active": list(lagrange.active_labels),
        "povm": [
            {"label": e.label, "weight": _num(e.weight), "direction": _vec(e.direction)} for e in povm
        ],
        "states": [
            {"label": lab, "p": _num(op.p), "r": _vec(op.r), "class": str(dict(classes)[lab])}
            for lab, op in ensemble
        ],
        "certificate": {k: (v if isinstance(v, bool) else _num(v)) for k, v in certificate.as_dict().items()},
        "solver": {k: (_num(v) if isinstance(v, float) else v) for k, v in solver.items()},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    report = json.loads(text)
    if report.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"unsupported report schema {report.get('schema')!r}")
    return report


def render_text(report: dict) -> str:
    """Short human-readable summary of a report."""
    lines = [
        f"P_guess      {report['p_guess']:.12g}",
        f"sigma        t={report['sigma']['t']:.12g}  s=({', '.join(f'{c:.12g}' for c in report['sigma']['s'])})",
        f"case         {report['case']}  active: {', '.join(report['active'])}",
        "states",
    ]
    weights: dict[str, float] = {}
    for e in report["povm"]:
        weights[e["label"]] = weights.get(e["label"], 0.0) + e["weight"]
    for st in report["states"]:
        lines.append(f"  {st['label']:<10} {st['class']:<16} weight {weights.get(st['label'], 0.0):.12g}")
    cert = report["certificate"]
    worst = max(v for k, v in cert.items() if k not in ("passed", "tolerance"))
    lines.append(f"certificate  {'passed' if cert['passed'] else 'FAILED'} (largest residual {worst:.3g}, tol {cert['tolerance']:g})")
    lines.append(f"method       {report['solver']['method']}")
    return "\n".join(lines) + "\n"
