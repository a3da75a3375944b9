"""Real roots of polynomials up to degree four.

The fast path is the closed form (Cardano for cubics, Ferrari for
quartics) followed by Newton polishing. When the closed form looks
unreliable -- nearly real complex pairs, clustered roots, or a residual
that fails the bound -- roots are recomputed by bracketing between the
real critical points, recursing on the derivative. That route handles
repeated roots exactly because a multiple root of ``p`` is a root of
``p'`` as well.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

MERGE_RTOL = 1e-7
RESIDUAL_RTOL = 1e-8
LEADING_TOL = 1e-14

Roots = list[tuple[float, int]]


class DegenerateLeadingCoefficient(ValueError):
    pass


def horner(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def derivative(coeffs: Sequence[float]) -> list[float]:
    n = len(coeffs) - 1
    return [c * (n - i) for i, c in enumerate(coeffs[:-1])]


def _eval_scale(coeffs, x):
    # magnitude that bounds rounding error of horner(coeffs, x)
    ax = abs(x)
    acc = 0.0
    for c in coeffs:
        acc = acc * ax + abs(c)
    return acc


def _newton_polish(coeffs, x, iters=6):
    dcoeffs = derivative(coeffs)
    best, best_res = x, abs(horner(coeffs, x))
    for _ in range(iters):
        d = horner(dcoeffs, x)
        if d == 0.0:
            break
        x = x - horner(coeffs, x) / d
        res = abs(horner(coeffs, x))
        if res < best_res:
            best, best_res = x, res
        elif res >= best_res:
            break
    return best


def _merge(roots: Sequence[tuple[float, int]]) -> Roots:
    out: Roots = []
    for x, k in sorted(roots):
        if out and abs(x - out[-1][0]) <= MERGE_RTOL * (1.0 + abs(out[-1][0])):
            x0, k0 = out[-1]
            out[-1] = ((x0 * k0 + x * k) / (k0 + k), k0 + k)
        else:
            out.append((x, k))
    return out


def _cauchy_bound(coeffs):
    lead = coeffs[0]
    return 1.0 + max(abs(c / lead) for c in coeffs[1:])


def _bracketed_roots(coeffs: list[float]) -> Roots:
    """Real roots with multiplicity by isolating them between critical points."""
    n = len(coeffs) - 1
    if n == 0:
        return []
    if n == 1:
        return [(-coeffs[1] / coeffs[0], 1)]
    crit = _bracketed_roots(derivative(coeffs))
    bound = _cauchy_bound(coeffs)
    found: Roots = []
    points = [(-bound, 0)]
    for c, k in crit:
        if abs(horner(coeffs, c)) <= 1e-12 * _eval_scale(coeffs, c):
            found.append((c, k + 1))
        points.append((c, k))
    points.append((bound, 0))
    root_set = {x for x, _ in found}
    for (a, _), (b, _) in zip(points, points[1:]):
        if a in root_set or b in root_set or b <= a:
            continue
        fa, fb = horner(coeffs, a), horner(coeffs, b)
        if fa == 0.0 or fb == 0.0 or (fa > 0) == (fb > 0):
            continue
        x = brentq(lambda v: horner(coeffs, v), a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        found.append((_newton_polish(coeffs, x), 1))
    return _merge(found)


def _cubic_complex(a, b, c):
    """All three roots of monic x^3 + a x^2 + b x + c."""
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    if p == 0.0 and q == 0.0:
        return [complex(-shift)] * 3
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    sq = cmath.sqrt(disc)
    # pick the larger-magnitude branch to avoid cancellation
    w = -q / 2.0 + sq if abs(-q / 2.0 + sq) >= abs(-q / 2.0 - sq) else -q / 2.0 - sq
    u = w ** (1.0 / 3.0) if w != 0 else 0j
    omega = complex(-0.5, math.sqrt(3.0) / 2.0)
    roots = []
    for k in range(3):
        uk = u * omega**k
        vk = -p / (3.0 * uk) if uk != 0 else 0j
        roots.append(uk + vk - shift)
    return roots


def _quartic_complex(a, b, c, d):
    """All four roots of monic x^4 + a x^3 + b x^2 + c x + d (Ferrari)."""
    shift = a / 4.0
    p = b - 3.0 * a * a / 8.0
    q = c - a * b / 2.0 + a**3 / 8.0
    r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a**4 / 256.0
    if abs(q) <= 1e-14 * (1.0 + abs(p) + abs(r)):
        # biquadratic y^4 + p y^2 + r
        out = []
        for z in _quadratic_complex(1.0, p, r):
            sz = cmath.sqrt(z)
            out += [sz - shift, -sz - shift]
        return out
    # resolvent: m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0, want m with 2m > 0
    cands = _cubic_complex(p, p * p / 4.0 - r, -q * q / 8.0)
    m = max(cands, key=lambda z: z.real - 1e3 * abs(z.imag))
    sq2m = cmath.sqrt(2.0 * m)
    out = []
    for sgn in (1.0, -1.0):
        # y^2 -/+ sqrt(2m) y + (p/2 + m +/- q/(2 sqrt(2m)))
        bq = -sgn * sq2m
        cq = p / 2.0 + m + sgn * q / (2.0 * sq2m)
        for z in _quadratic_complex(1.0, bq, cq):
            out.append(z - shift)
    return out


def _quadratic_complex(a, b, c):
    disc = cmath.sqrt(b * b - 4 * a * c)
    qq = -0.5 * (b + disc) if (b.conjugate() * disc).real >= 0 else -0.5 * (b - disc)
    if qq == 0:
        return [0j, 0j]
    return [qq / a, c / qq]


def _closed_form_real(coeffs, complex_roots) -> Roots | None:
    """Polish the real members of a closed-form root set; None if unreliable."""
    real = []
    for z in complex_roots:
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            return None
        scale = 1.0 + abs(z)
        if abs(z.imag) <= 1e-12 * scale:
            real.append(z.real)
        elif abs(z.imag) <= 1e-5 * scale:
            return None  # near-multiple root split into a complex pair
    real = sorted(_newton_polish(coeffs, x) for x in real)
    for x0, x1 in zip(real, real[1:]):
        if abs(x1 - x0) <= 1e-5 * (1.0 + abs(x0)):
            return None
    bound = RESIDUAL_RTOL * max(abs(c) for c in coeffs)
    if any(abs(horner(coeffs, x)) > bound for x in real):
        return None
    return [(x, 1) for x in real]


def _check_leading(coeffs):
    scale = max(abs(c) for c in coeffs)
    if scale == 0 or abs(coeffs[0]) <= LEADING_TOL * scale:
        raise DegenerateLeadingCoefficient(f"leading coefficient {coeffs[0]!r} is negligible")


def real_roots_cubic(c3: float, c2: float, c1: float, c0: float) -> Roots:
    """Real roots of ``c3 x^3 + c2 x^2 + c1 x + c0``, ascending, with multiplicities."""
    coeffs = [float(c3), float(c2), float(c1), float(c0)]
    _check_leading(coeffs)
    monic = [c / coeffs[0] for c in coeffs]
    roots = _closed_form_real(monic, _cubic_complex(*monic[1:]))
    if roots is None:
        roots = _bracketed_roots(monic)
    return _merge(roots)


def real_roots_quartic(c4: float, c3: float, c2: float, c1: float, c0: float) -> Roots:
    """Real roots of ``c4 x^4 + ... + c0``, ascending, with multiplicities."""
    coeffs = [float(c4), float(c3), float(c2), float(c1), float(c0)]
    _check_leading(coeffs)
    monic = [c / coeffs[0] for c in coeffs]
    roots = _closed_form_real(monic, _quartic_complex(*monic[1:]))
    if roots is None:
        roots = _bracketed_roots(monic)
    return _merge(roots)


def real_roots(coeffs: Sequence[float]) -> Roots:
    """Real roots of a polynomial of degree <= 4 given highest degree first.

    Negligible leading coefficients are dropped. An identically zero
    polynomial has no isolated roots and returns an empty list.
    """
    coeffs = [float(c) for c in coeffs]
    scale = max((abs(c) for c in coeffs), default=0.0)
    while coeffs and abs(coeffs[0]) <= LEADING_TOL * scale:
        coeffs.pop(0)
    if len(coeffs) > 5:
        raise ValueError("degree above 4 is not supported")
    if len(coeffs) <= 1:
        return []
    if len(coeffs) == 2:
        return [(-coeffs[1] / coeffs[0], 1)]
    if len(coeffs) == 3:
        a, b, c = coeffs
        disc = b * b - 4 * a * c
        if disc < -1e-14 * max(b * b, abs(4 * a * c)):
            return []
        if disc <= 1e-14 * max(b * b, abs(4 * a * c)):
            return [(-b / (2 * a), 2)]
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        return _merge([(q / a, 1), (c / q, 1)])
    if len(coeffs) == 4:
        return real_roots_cubic(*coeffs)
    return real_roots_quartic(*coeffs)
