"""Gamma-factor helpers: log Gamma_R and its logarithmic derivative.

log Gamma is taken from scipy (principal, continuous off the negative real
axis). The digamma function is computed here by upward recurrence followed by
the asymptotic series, which is what the archimedean terms use.
"""

import math

import numpy as np
from scipy.special import loggamma

LOG_PI = math.log(math.pi)

# B_{2k}/(2k) for k = 1..8
_PSI_ASYMP = np.array([1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132,
                       -691 / 32760, 1 / 12, -3617 / 8160])
_SHIFT = 12.0


def digamma(z):
    """psi(z) for complex z with Re z > 0 (vectorized).

    Shifts z up until |z| >= 12, then applies
    psi(z) ~ log z - 1/(2z) - sum B_{2k} / (2k z^{2k}).
    """
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    w = z.copy()
    # recurrence psi(z) = psi(z+1) - 1/z
    for _ in range(int(_SHIFT) + 1):
        small = np.abs(w) < _SHIFT
        if not small.any():
            break
        acc = acc - np.where(small, 1.0 / w, 0.0)
        w = np.where(small, w + 1.0, w)
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    for c in _PSI_ASYMP[::-1]:
        series = (series + c) * inv2
    return acc + np.log(w) - 0.5 / w - series


def log_gamma_r(s):
    """log Gamma_R(s) = -(s/2) log pi + log Gamma(s/2), principal branch."""
    s = np.asarray(s, dtype=complex)
    return -0.5 * s * LOG_PI + loggamma(0.5 * s)


def gamma_r_log_deriv(s):
    """Gamma_R'/Gamma_R(s) = -(log pi)/2 + psi(s/2)/2."""
    s = np.asarray(s, dtype=complex)
    return -0.5 * LOG_PI + 0.5 * digamma(0.5 * s)


def archimedean_integrand(u, mu):
    """Re Gamma_R'/Gamma_R(1/2 + mu + iu), the weight in the explicit formula."""
    u = np.asarray(u, dtype=float)
    return gamma_r_log_deriv(0.5 + mu + 1j * u).real


def stirling_band(u, mu):
    """Leading-order proxy (1/2) log(|mu + iu| + 3); a sanity band only."""
    u = np.asarray(u, dtype=float)
    return 0.5 * np.log(np.abs(mu + 1j * u) + 3.0)
