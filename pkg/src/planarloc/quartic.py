"""Closed-form real-root extraction for polynomials up to degree four.

Roots are computed analytically (quadratic formula, Cardano, Ferrari) in
complex arithmetic, polished with two guarded Newton steps on the original
polynomial, then filtered to the real axis and de-duplicated.
"""

from __future__ import annotations

import cmath

import numpy as np

# Roots within this of the real axis (relative to magnitude) count as real.
REAL_TOL = 1e-8
# Distinct real roots closer than this collapse to one.
DEDUPE_TOL = 1e-10


class IdenticallyZero(ValueError):
    """Every coefficient is (near) zero, so every value is a root."""


def _eval(coeffs, x):
    acc = 0j
    for c in coeffs:
        acc = acc * x + c
    return acc


def _eval_deriv(coeffs, x):
    n = len(coeffs) - 1
    acc = 0j
    for i, c in enumerate(coeffs[:-1]):
        acc = acc * x + (n - i) * c
    return acc


def _polish(coeffs, x, steps=20):
    # guarded Newton: keep a step only if it does not grow |f|; run to
    # convergence so duplicate seeds of one root collapse to one point
    fx = _eval(coeffs, x)
    for _ in range(steps):
        d = _eval_deriv(coeffs, x)
        if d == 0:
            break
        dx = fx / d
        x_new = x - dx
        f_new = _eval(coeffs, x_new)
        if abs(f_new) > abs(fx):
            break
        x, fx = x_new, f_new
        if abs(dx) < 1e-15 * (1.0 + abs(x)):
            break
    return x


def _quadratic(b, c):
    # roots of x^2 + b x + c
    sq = cmath.sqrt(b * b - 4.0 * c)
    return [(-b + sq) / 2.0, (-b - sq) / 2.0]


def _cubic(b, c, d):
    # roots of x^3 + b x^2 + c x + d via Cardano on the depressed cubic
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    disc = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    u = (-q / 2.0 + disc) ** (1.0 / 3.0)
    if abs(u) < 1e-300:
        u = (-q / 2.0 - disc) ** (1.0 / 3.0)
    if abs(u) < 1e-300:
        return [shift] * 3  # p == q == 0: triple root
    omega = complex(-0.5, 0.8660254037844386)
    roots = []
    for k in range(3):
        w = u * omega ** k
        roots.append(w - p / (3.0 * w) + shift)
    return roots


def _quartic(b, c, d, e):
    # roots of x^4 + b x^3 + c x^2 + d x + e via Ferrari's factorization
    p = c - 3.0 * b * b / 8.0
    q = d - b * c / 2.0 + b ** 3 / 8.0
    r = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b ** 4 / 256.0
    shift = -b / 4.0
    if abs(q) < 1e-12:
        # biquadratic: y^4 + p y^2 + r
        roots = []
        for z in _quadratic(p, r):
            s = cmath.sqrt(z)
            roots.extend([s + shift, -s + shift])
        return roots
    # resolvent cubic: m^3 + p m^2 + (p^2/4 - r) m - q^2/8
    resolvent = _cubic(p, p * p / 4.0 - r, -q * q / 8.0)
    # a real positive root exists when q != 0; take the best-conditioned one
    m = max(resolvent, key=lambda z: z.real)
    s = cmath.sqrt(2.0 * m)
    if abs(s) < 1e-150:
        s = complex(1e-150)
    alpha = (p + 2.0 * m - q / s) / 2.0
    beta = (p + 2.0 * m + q / s) / 2.0
    roots = []
    sq1 = cmath.sqrt(s * s - 4.0 * alpha)
    roots.extend([(-s + sq1) / 2.0 + shift, (-s - sq1) / 2.0 + shift])
    sq2 = cmath.sqrt(s * s - 4.0 * beta)
    roots.extend([(s + sq2) / 2.0 + shift, (s - sq2) / 2.0 + shift])
    return roots


def _analytic_roots(work):
    """All complex roots of the trimmed coefficient array `work`."""
    monic = [complex(c / work[0]) for c in work[1:]]
    degree = len(work) - 1
    if degree == 1:
        return [-monic[0]]
    if degree == 2:
        return _quadratic(*monic)
    if degree == 3:
        return _cubic(*monic)
    return _quartic(*monic)


def _trim(arr):
    work = arr
    while len(work) > 1 and abs(work[0]) < 1e-12:
        work = work[1:]
    return work


def _backward_error(coeffs, x):
    """|p(x)| relative to the attainable evaluation magnitude at x."""
    num = abs(_eval(coeffs, x))
    den = 0.0
    ax = abs(x)
    for c in coeffs:
        den = den * ax + abs(c)
    return num / den if den > 0 else num


def _deflate(coeffs, root):
    """Quotient of polynomial division by (x - root).

    Forward synthetic division is stable when the removed root is small,
    the backward recurrence when it is large; pick by magnitude.
    """
    n = len(coeffs) - 1
    q = [0j] * n
    if abs(root) > 1.0:
        q[n - 1] = -coeffs[n] / root
        for k in range(1, n):
            q[n - 1 - k] = (q[n - k] - coeffs[n - k]) / root
    else:
        q[0] = coeffs[0]
        for i in range(1, n):
            q[i] = coeffs[i] + root * q[i - 1]
    return q


def solve_quartic(coeffs) -> np.ndarray:
    """Real roots of a polynomial of degree at most four.

    Parameters
    ----------
    coeffs : length-5 array-like, highest degree first. The degree degrades
        gracefully when leading coefficients vanish.

    Returns
    -------
    (k,) float array of real roots, ascending and de-duplicated (k <= 4).

    Raises
    ------
    IdenticallyZero when every |coefficient| < 1e-14.
    ValueError for inputs that are not length 5.
    """
    arr = np.asarray(coeffs, dtype=float).ravel()
    if arr.shape != (5,):
        raise ValueError(f"expected 5 coefficients, got shape {arr.shape}")
    scale = float(np.abs(arr).max())
    if scale < 1e-14:
        raise IdenticallyZero("all coefficients vanish")
    work = _trim(arr / scale)
    degree = len(work) - 1
    if degree == 0:
        return np.empty(0)

    full = [complex(c) for c in work]

    # Wide coefficient spreads defeat any single closed-form transform:
    # a tiny leading coefficient wrecks the depressed-polynomial shift,
    # a dominant middle coefficient poisons the resolvent.  Seed from the
    # forward solve, the reversed polynomial (reciprocal roots, conditions
    # the far-out scale), and magnitude-split quadratics (condition the
    # dominant-middle scale), then let polishing plus a backward-error
    # check on the original polynomial arbitrate.
    seeds = list(_analytic_roots(work))
    if degree >= 2:
        rev = _trim(np.asarray(work[::-1]))
        if len(rev) > 1:
            seeds += [1.0 / x for x in _analytic_roots(rev) if abs(x) > 1e-300]
        for i in range(degree - 1):
            a, b, c = work[i], work[i + 1], work[i + 2]
            if abs(a) > 1e-300:
                seeds += _quadratic(complex(b / a), complex(c / a))
    roots = [_polish(full, x) for x in seeds]

    verified = []
    for x in roots:
        if _backward_error(full, x) < 1e-10 and all(
                abs(x - y) > 1e-8 * (1.0 + abs(y)) for y in verified):
            verified.append(x)
    if verified and len(verified) < degree:
        # Roots still unaccounted for: deflate the pinned-down ones and
        # re-solve the remainder at its own scale.
        reduced = full
        for r in verified:
            if len(reduced) <= 2:
                break
            reduced = _deflate(reduced, r)
        top = max(abs(c) for c in reduced)
        if top > 0:
            reduced = [c / top for c in reduced]
            while len(reduced) > 1 and abs(reduced[0]) < 1e-12:
                reduced = reduced[1:]
            if len(reduced) > 1:
                for x in _analytic_roots(reduced):
                    roots.append(_polish(full, x))
    roots = [x for x in roots if _backward_error(full, x) < 1e-11]

    real = sorted(x.real for x in roots
                  if abs(x.imag) < REAL_TOL * (1.0 + abs(x.real)))
    out = []
    for x in real:
        if out:
            near = x - out[-1] <= DEDUPE_TOL + 1e-9 * abs(x)
            if near or _backward_error(
                    full, complex(0.5 * (x + out[-1]))) < 1e-11:
                # same root seen twice (a multiple root reached from both
                # sides): keep whichever copy evaluates closer to zero
                if abs(_eval(full, complex(x))) < abs(
                        _eval(full, complex(out[-1]))):
                    out[-1] = x
                continue
        out.append(x)
    return np.asarray(out)
