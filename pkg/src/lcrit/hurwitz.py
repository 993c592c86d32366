"""Hurwitz zeta function by Euler-Maclaurin summation.

    zeta(s, a) = sum_{k<M} (k+a)^{-s} + N^{1-s}/(s-1) + N^{-s}/2
                 + sum_{j=1}^{p} B_{2j}/(2j)! (s)_{2j-1} N^{-s-2j+1} + R,

with N = M + a and (s)_r the rising factorial. The s-derivative is obtained
by differentiating every term, not by finite differences.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import AccuracyError, DomainError, PoleError

ORDER = 12  # Bernoulli correction terms B_2 .. B_24


def _bernoulli_numbers(n):
    # Akiyama-Tanigawa, exact
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out  # B_1 = +1/2 convention, unused here


_B = _bernoulli_numbers(2 * ORDER + 2)
# B_{2j}/(2j)! for j = 1..ORDER+1 (the last one only feeds the error estimate)
_COEF = np.array([float(_B[2 * j] / math.factorial(2 * j)) for j in range(1, ORDER + 2)])


def shift_for(s):
    """Number of directly summed terms M for argument(s) ``s``.

    Chosen so that |s + M| > max(10, 2 |Im s|) for every entry.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    need = np.maximum(10.0, 2.0 * np.abs(s.imag)) + np.abs(s) + 1.0
    return int(math.ceil(float(np.max(need))))


def _em(s, alphas, derivative):
    """Core evaluation. ``s``: (S,) complex, ``alphas``: (A,) real.

    Returns (value, dvalue or None, error) with shapes (S, A).
    """
    s = np.asarray(s, dtype=complex)[:, None, None]
    alphas = np.asarray(alphas, dtype=float)
    M = shift_for(s.ravel())
    k = np.arange(M, dtype=float)
    base = k[None, None, :] + alphas[None, :, None]  # (1, A, M)
    logb = np.log(base)
    terms = np.exp(-s * logb)  # (S, A, M)
    head = terms.sum(axis=2)

    s2 = s[:, :, 0]  # (S, 1)
    N = (M + alphas)[None, :]
    logN = np.log(N)
    NmS = np.exp(-s2 * logN)  # N^{-s}
    sm1 = s2 - 1.0
    integral = N * NmS / sm1
    value = head + integral + 0.5 * NmS

    # Bernoulli corrections with rising factorial (s)_{2j-1}
    rise = np.ones_like(s2)
    drise = np.zeros_like(s2)
    power = NmS / N  # N^{-s-1}
    corr = np.zeros_like(value)
    dcorr = np.zeros_like(value)
    last = None
    for j in range(1, ORDER + 2):
        # extend rising factorial from (s)_{2j-3} to (s)_{2j-1}
        for i in ((2 * j - 3, 2 * j - 2) if j > 1 else (0,)):
            drise = drise * (s2 + i) + rise
            rise = rise * (s2 + i)
        term = _COEF[j - 1] * rise * power
        if j == ORDER + 1:
            last = term
            break
        corr = corr + term
        if derivative:
            dcorr = dcorr + _COEF[j - 1] * power * (drise - logN * rise)
        power = power / (N * N)
    value = value + corr
    err = 2.0 * np.abs(last) + 8 * np.finfo(float).eps * (np.abs(terms).sum(axis=2) + np.abs(value))

    dvalue = None
    if derivative:
        dhead = -(logb * terms).sum(axis=2)
        dintegral = integral * (-logN - 1.0 / sm1)
        dvalue = dhead + dintegral - 0.5 * logN * NmS + dcorr
    return value, dvalue, err


def _check(s, alphas):
    s = np.asarray(s, dtype=complex)
    if np.any(s == 1):
        raise PoleError("zeta(s, a) has a pole at s = 1")
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas <= 0) or np.any(alphas > 1):
        raise DomainError("Hurwitz parameter must lie in (0, 1]")
    if not np.all(np.isfinite(s)):
        raise DomainError("non-finite argument")


def hurwitz_zeta_many(s, alphas, derivative=False, chunk=4096):
    """Vectorized zeta(s_i, a_j) on the outer grid of ``s`` and ``alphas``.

    Returns ``(value, dvalue, err)`` arrays of shape (len(s), len(alphas));
    ``dvalue`` is None unless ``derivative``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    _check(s, alphas)
    vals, dvals, errs = [], [], []
    # group points with similar heights so M stays small for the low ones
    order = np.argsort(np.abs(s.imag), kind="stable")
    for start in range(0, len(s), chunk):
        sel = order[start:start + chunk]
        v, dv, e = _em(s[sel], alphas, derivative)
        vals.append((sel, v))
        errs.append((sel, e))
        if derivative:
            dvals.append((sel, dv))
    value = np.empty((len(s), len(alphas)), dtype=complex)
    err = np.empty((len(s), len(alphas)))
    for sel, v in vals:
        value[sel] = v
    for sel, e in errs:
        err[sel] = e
    dvalue = None
    if derivative:
        dvalue = np.empty_like(value)
        for sel, dv in dvals:
            dvalue[sel] = dv
    return value, dvalue, err


def hurwitz_zeta(s, a, tol=None, with_error=False):
    """zeta(s, a) for scalar s != 1 and a in (0, 1].

    With ``tol`` given, raises :class:`AccuracyError` when the error estimate
    exceeds it.
    """
    v, _, e = hurwitz_zeta_many([s], [a])
    value, err = complex(v[0, 0]), float(e[0, 0])
    if tol is not None and err > tol:
        raise AccuracyError(f"hurwitz_zeta error estimate {err:.3g} exceeds {tol:.3g}", err)
    return (value, err) if with_error else value


def hurwitz_zeta_ds(s, a, with_error=False):
    """Partial derivative d/ds zeta(s, a)."""
    _, dv, e = hurwitz_zeta_many([s], [a], derivative=True)
    value = complex(dv[0, 0])
    return (value, float(e[0, 0]) * (1 + abs(math.log(a)))) if with_error else value
