"""Sieves for the von Mangoldt function and character-twisted coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SIEVE_CAP = 10**7


def primes_upto(n):
    """Primes <= n (Eratosthenes on a boolean array)."""
    n = int(n)
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.flatnonzero(flags)


def prime_powers_upto(n):
    """Sorted arrays (m, p) of all prime powers m = p^k <= n with their base."""
    ps = primes_upto(n)
    ms, bases = [ps], [ps]
    small = ps[ps <= math.isqrt(int(n))]
    power = small.copy()
    while len(small):
        power = power * small
        keep = power <= n
        small, power = small[keep], power[keep]
        ms.append(power)
        bases.append(small)
    m = np.concatenate(ms)
    p = np.concatenate(bases)
    order = np.argsort(m, kind="stable")
    return m[order], p[order]


def von_mangoldt_array(n):
    """Lambda(k) for k = 0..n as a float array."""
    out = np.zeros(int(n) + 1)
    m, p = prime_powers_upto(n)
    out[m] = np.log(p)
    return out


def chebyshev_psi(x):
    m, p = prime_powers_upto(x)
    return math.fsum(np.log(p))


@dataclass(frozen=True)
class VonMangoldtCoefficient:
    n: int
    value: complex  # Lambda_chi(n) = chi(p)^k log p
    classical: float  # Lambda(n) = log p


def _twisted(m, p, chi):
    # Lambda_chi(p^k) = chi(p)^k log p = chi(p^k) log p (total multiplicativity)
    logp = np.log(p)
    return chi.values[m % chi.q] * logp, logp


def twisted_coefficients(x_max, chi):
    """Arrays (n, Lambda_chi(n), Lambda(n)) over prime powers n <= x_max."""
    m, p = prime_powers_upto(x_max)
    lam_chi, lam = _twisted(m, p, chi)
    return m, lam_chi, lam


def iter_twisted_chunks(x_max, chi, chunk=SIEVE_CAP):
    """Chunked (segmented) iteration for ranges beyond the in-memory cap."""
    x_max = int(x_max)
    base = primes_upto(math.isqrt(x_max))
    lo = 2
    while lo <= x_max:
        hi = min(x_max, lo + chunk - 1)
        seg = np.arange(lo, hi + 1)
        # primes in [lo, hi] by segmented sieve
        flags = np.ones(len(seg), dtype=bool)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            flags[start - lo::p] = False
        primes = seg[flags]
        ms, ps = [primes], [primes]
        # higher powers of small primes landing in this segment
        for p in base:
            pk = p * p
            while pk <= hi:
                if pk >= lo:
                    ms.append(np.array([pk]))
                    ps.append(np.array([p]))
                pk *= p
        m = np.concatenate(ms)
        p = np.concatenate(ps)
        order = np.argsort(m, kind="stable")
        m, p = m[order], p[order]
        lam_chi, lam = _twisted(m, p, chi)
        yield m, lam_chi, lam
        lo = hi + 1


def von_mangoldt_table(x_max, chi):
    """List of VonMangoldtCoefficient for every prime power n <= x_max."""
    if x_max < 2:
        raise ValueError("x_max must be >= 2")
    if x_max > SIEVE_CAP:
        parts = list(iter_twisted_chunks(x_max, chi))
        m = np.concatenate([a for a, _, _ in parts])
        lam_chi = np.concatenate([b for _, b, _ in parts])
        lam = np.concatenate([c for _, _, c in parts])
    else:
        m, lam_chi, lam = twisted_coefficients(x_max, chi)
    return [VonMangoldtCoefficient(int(a), complex(b), float(c)) for a, b, c in zip(m, lam_chi, lam)]
