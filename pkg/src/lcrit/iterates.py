"""Iterates of the argument function.

    S_{-1,sigma}(t) = (1/pi) Re L'/L(sigma + it)
    S_{n,sigma}(t)  = -(1/pi) Im{ (i^n/n!) int_sigma^inf (u - sigma)^n L'/L(u + it) du },  n >= 0

The integral is split at u = SPLIT: adaptive Gauss-Kronrod on [sigma, SPLIT]
and, beyond it, the Dirichlet series -sum Lambda_chi(m) m^{-s} integrated term
by term in closed form (upper incomplete gamma with integer order).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import tol
from .errors import AccuracyError, DomainError
from .lfunc import log_deriv_many
from .primes import twisted_coefficients
from .quadrature import gauss_kronrod

# The tail series converges like X^{1-SPLIT}; starting it at 3/2 would need
# ~1e26 terms for 1e-13, at 6 a few thousand suffice.
SPLIT = 6.0
PSI_CONST = 1.04  # psi(x) <= 1.04 x, used in the tail remainder bound
RICHARDSON_EPS = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True)
class IterateValue:
    n: int
    sigma: float
    t: float
    value: float
    error: float
    at_zero_ordinate: bool = False


def _check_args(n, sigma):
    if n < -1:
        raise DomainError("n must be >= -1")
    if not 0.5 <= sigma <= 1.0:
        raise DomainError("sigma must lie in [1/2, 1]")
    if sigma == 0.5 and n in (-1, 0):
        raise DomainError("sigma = 1/2 is only supported for n >= 1 (use S_halflimit for n = 0)")


# -- tail ------------------------------------------------------------------------

def _exp_partial(x, n):
    """e_n(x) = sum_{k<=n} x^k / k! (array x)."""
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, n + 1):
        term = term * x / k
        total = total + term
    return total


def _tail_remainder(X, n, sigma, split):
    # sum_{m>X} Lambda(m) m^{-split} e_n(c log m)/(log m)^{n+1}, c = split - sigma,
    # bounded by 2 * psi-constant * X^{1-split} e_n(c log X)/((split-1) (log X)^n)
    lx = math.log(X)
    en = float(_exp_partial(np.array([(split - sigma) * lx]), n)[0])
    return 2 * PSI_CONST * X ** (1 - split) * en / ((split - 1) * lx**n)


@lru_cache(maxsize=32)
def _tail_terms(chi, x_max):
    m, lam_chi, _ = twisted_coefficients(x_max, chi)
    return m.astype(float), lam_chi


def _tail_cutoff(nmax, sigma, split, target):
    X = 64
    while _tail_remainder(X, nmax, sigma, split) > target:
        X *= 2
        if X > 1 << 24:
            raise AccuracyError("tail series cannot reach tolerance", _tail_remainder(X, nmax, sigma, split))
    return X


def _tail_integrals(nmax, sigma, t, chi, split=SPLIT, target=None):
    """(1/k!) int_split^inf (u - sigma)^k L'/L(u + it) du for k = 0..nmax."""
    target = tol("tail") if target is None else target
    X = _tail_cutoff(nmax, sigma, split, target)
    m, lam_chi = _tail_terms(chi, X)
    logm = np.log(m)
    c = split - sigma
    base = -lam_chi * np.exp(-split * logm - 1j * t * logm)
    x = c * logm
    out = np.empty(nmax + 1, dtype=complex)
    for k in range(nmax + 1):
        # int_c^inf v^k e^{-v log m} dv / k! = e^{-c log m} e_k(c log m) / (log m)^{k+1}
        w = _exp_partial(x, k) / logm ** (k + 1)
        out[k] = np.sum(base * w)
    return out, _tail_remainder(X, nmax, sigma, split)


# -- main evaluation -------------------------------------------------------------

def _moment_integrals(nmax, sigma, t, chi, split=SPLIT, epsabs=None):
    """(1/k!) int_sigma^split (u - sigma)^k L'/L(u + it) du, k = 0..nmax."""
    epsabs = tol("quad") if epsabs is None else epsabs
    fact = np.array([math.factorial(k) for k in range(nmax + 1)], dtype=float)

    def f(u):
        ld = log_deriv_many(u + 1j * t, chi, guard=False)
        powers = (u - sigma)[:, None] ** np.arange(nmax + 1)[None, :] / fact[None, :]
        return powers * ld[:, None]

    return gauss_kronrod(f, sigma, split, epsabs=epsabs, limit=2000, initial=4)


def S_all(nmax, sigma, t, chi):
    """IterateValues for n = -1..nmax from one shared quadrature."""
    if nmax < 0:
        return [S(-1, sigma, t, chi)]
    _check_args(0 if sigma > 0.5 else 1, sigma)
    quad, qerr = _moment_integrals(nmax, sigma, t, chi)
    tail, terr = _tail_integrals(nmax, sigma, t, chi)
    total = quad + tail
    out = [S(-1, sigma, t, chi)] if sigma > 0.5 else []
    for k in range(nmax + 1):
        if sigma == 0.5 and k == 0:
            continue
        val = -(1j**k * total[k]).imag / math.pi
        out.append(IterateValue(k, sigma, float(t), float(val), (qerr + terr) / math.pi))
    return out


def S(n, sigma, t, chi):
    """S_{n,sigma}(t, chi) with an error estimate."""
    _check_args(n, sigma)
    if n == -1:
        ld = log_deriv_many(np.array([sigma + 1j * t]), chi, guard=True)
        return IterateValue(-1, sigma, float(t), float(ld[0].real / math.pi), 1e-13)
    return _S_nonneg(n, sigma, t, chi)


def _S_nonneg(n, sigma, t, chi):
    if n == 0 and sigma > 0.5:
        # guard against evaluating right at a zero of L off the line (cannot
        # happen under GRH, but keeps the failure explicit)
        log_deriv_many(np.array([sigma + 1j * t]), chi, guard=True)
    quad, qerr = _moment_integrals(n, sigma, t, chi)
    tail, terr = _tail_integrals(n, sigma, t, chi)
    total = quad[n] + tail[n]
    val = -(1j**n * total).imag / math.pi
    return IterateValue(n, sigma, float(t), float(val), float(qerr + terr) / math.pi)


def _S_worker(args):
    n, sigma, t, chi = args
    return S(n, sigma, t, chi)


def S_many(n, sigma, ts, chi, jobs=1):
    """S at many heights; ``jobs > 1`` farms heights out to processes (order kept)."""
    args = [(n, sigma, float(t), chi) for t in ts]
    if jobs <= 1 or len(args) < 2:
        return [_S_worker(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_S_worker, args, chunksize=max(1, len(args) // (4 * jobs))))


def S_halflimit(sigma, gamma, chi, eps=RICHARDSON_EPS, rtol=1e-6):
    """lim (S_0(gamma + e) + S_0(gamma - e))/2 by Richardson extrapolation.

    The symmetric average is even in e, so two Richardson sweeps in e^2 are
    used over the three step sizes.
    """
    if not 0.5 <= sigma <= 1:
        raise DomainError("sigma must lie in [1/2, 1]")
    avgs = []
    for e in eps:
        hi = _S_nonneg(0, sigma, gamma + e, chi)
        lo = _S_nonneg(0, sigma, gamma - e, chi)
        avgs.append(0.5 * (hi.value + lo.value))
    r = [e / eps[0] for e in eps]
    # first sweep (assumes ratio 2 between consecutive steps)
    if not all(abs(r[i + 1] / r[i] - 0.5) < 1e-12 for i in range(len(r) - 1)):
        raise DomainError("Richardson steps must halve")
    a1 = [(4 * avgs[i + 1] - avgs[i]) / 3 for i in range(len(avgs) - 1)]
    a2 = (16 * a1[1] - a1[0]) / 15
    spread = abs(a1[1] - a1[0])
    if spread > max(rtol, rtol * abs(a2)) * 100:
        raise AccuracyError(f"half-limit extrapolation did not settle: averages {avgs}", spread)
    return IterateValue(0, sigma, float(gamma), float(a2), float(spread), at_zero_ordinate=True)


def S0_jump(sigma, gamma, chi, eps=1e-3):
    """S_0(gamma + eps) - S_0(gamma - eps); tends to the zero's multiplicity at sigma = 1/2."""
    return _S_nonneg(0, sigma, gamma + eps, chi).value - _S_nonneg(0, sigma, gamma - eps, chi).value
