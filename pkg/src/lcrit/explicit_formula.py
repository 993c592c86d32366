"""Guinand-Weil explicit formula for band-limited test functions.

For an even test function g with hat g supported in [-Delta, Delta], recentred
at t,

    sum_gamma g(t - gamma) = (log q / 2 pi) hat g(0)
                             + (1/pi) int g(t - u) Re Gamma_R'/Gamma_R(1/2 + a + iu) du
                             - (1/2 pi) sum_{n <= e^{2 pi Delta}} n^{-1/2} hat g(log n / 2 pi)
                                   (Lambda_chi(n) n^{-it} + conj).

The archimedean integral is evaluated in Fourier form from the integral
representation of the digamma function; the zero sum over a finite list is
completed by integrating g against the smooth zero density beyond the list.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import exp1

from .errors import InsufficientZerosError
from .extremal import ExtremalSpec, extremal_eval, extremal_fourier
from .gamma import archimedean_integrand
from .primes import twisted_coefficients
from .quadrature import gauss_kronrod


@dataclass(frozen=True)
class BandLimited:
    """An even real test function known through hat g (and g on the line)."""

    fourier: object  # callable xi -> hat g(xi), vectorized
    real: object  # callable x -> g(x), vectorized
    delta: float
    label: str = "g"
    spec: object = None  # set when built from an ExtremalSpec (enables caching)

    @classmethod
    def from_spec(cls, spec):
        return cls(lambda xi: extremal_fourier(spec, xi), lambda x: extremal_eval(spec, x),
                   spec.delta, spec.label, spec)

    def combine(self, a, other, b):
        """a * self + b * other."""
        return BandLimited(
            lambda xi: a * self.fourier(xi) + b * other.fourier(xi),
            lambda x: a * self.real(x) + b * other.real(x),
            max(self.delta, other.delta),
            f"{a}*{self.label}+{b}*{other.label}",
        )


@dataclass
class GWReport:
    zero_side: float
    zero_sum: float
    zero_tail_estimate: float
    conductor_term: float
    archimedean_term: float
    prime_side: float
    prime_imag_residue: float
    residual: float
    tail_bound: float
    n_max: int
    zero_count: int
    height: float
    t: float
    character: str
    test_function: str
    decay_constant: float
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _as_band_limited(g):
    return BandLimited.from_spec(g) if isinstance(g, ExtremalSpec) else g


def conductor_term(chi, g):
    return math.log(chi.q) / (2 * math.pi) * float(g.fourier(np.array([0.0]))[0])


def archimedean_term(chi, g, t, epsabs=1e-12):
    """(1/pi) int g(t - u) Re Gamma_R'/Gamma_R(1/2 + a + iu) du, Fourier form.

    From psi(z) = int_0^inf (e^{-x}/x - e^{-zx}/(1 - e^{-x})) dx with
    z = (1/2 + a + iu)/2:

        int g(t-u) Re Gamma_R'/Gamma_R du = -(log pi)/2 hat g(0)
            + (1/2) int_0^inf [hat g(0) e^{-x}/x
                               - hat g(x/4pi) cos(tx/2) e^{-(1/2+a)x/2}/(1 - e^{-x})] dx
    """
    a = chi.parity
    g0 = float(g.fourier(np.array([0.0]))[0])
    b = 0.5 * (0.5 + a)
    top = 4 * math.pi * g.delta

    def f(x):
        # cancellation between the two 1/x singularities is mild above x ~ 1e-8
        k = np.exp(-b * x) / (-np.expm1(-x))
        gh = g.fourier(x / (4 * math.pi))
        return g0 * np.exp(-x) / x - gh * np.cos(0.5 * t * x) * k

    inner, err = gauss_kronrod(f, 0.0, top, epsabs=epsabs, limit=2000, initial=8)
    # beyond 4 pi Delta only the hat g(0) e^{-x}/x part survives
    total = -0.5 * math.log(math.pi) * g0 + 0.5 * (inner + g0 * exp1(top))
    return total / math.pi


def archimedean_term_real_space(chi, g, t, X=400.0, epsabs=1e-9):
    """Cross-check: direct quadrature of g(t - u) times the digamma weight on |u - t| <= X.

    The exterior is approximated from the asymptotic g ~ A / x^2 with A fitted at X.
    """
    mu = chi.parity

    def f(v):
        return g.real(v) * archimedean_integrand(t - v, mu) + g.real(-v) * archimedean_integrand(t + v, mu)

    inner, _ = gauss_kronrod(f, 0.0, X, epsabs=epsabs, limit=8000, initial=int(4 * X * g.delta) + 8)
    # g(x) x^2 averaged over one period near X approximates A
    xs = np.linspace(X, X + 4.0 / g.delta, 257)
    A = float(np.mean(g.real(xs) * xs**2))
    w_hi = archimedean_integrand(t + X, mu)
    w_lo = archimedean_integrand(t - X, mu)
    tail = A / X * (w_hi + w_lo)
    return (inner + tail) / math.pi


def prime_side(chi, g, t):
    """(1/2 pi) sum n^{-1/2} hat g(log n/2 pi) (Lambda_chi(n) n^{-it} + conj); (value, imag residue, n_max)."""
    n_max = int(math.floor(math.exp(2 * math.pi * g.delta)))
    if n_max < 2:
        return 0.0, 0.0, n_max
    m, lam_chi, _ = twisted_coefficients(n_max, chi)
    logm = np.log(m.astype(float))
    weight = g.fourier(logm / (2 * math.pi)) / np.sqrt(m)
    first = lam_chi * np.exp(-1j * t * logm)
    total = np.sum(weight * first) + np.sum(weight * np.conj(first))
    return float(total.real) / (2 * math.pi), float(total.imag) / (2 * math.pi), n_max


def zero_density(u, chi):
    """Smooth zero density (1/2 pi)(log q + 2 Re Gamma_R'/Gamma_R(1/2 + a + iu))."""
    return (math.log(chi.q) + 2 * archimedean_integrand(u, chi.parity)) / (2 * math.pi)


def empirical_decay_constant(g, lo=100.0, hi=1e4, points=61):
    """sup |g(x)| (1 + x^2) over lo <= |x| <= hi (log-spaced grid)."""
    if g.spec is not None:
        return _spec_decay_constant(g.spec, lo, hi, points)
    x = np.geomspace(lo, hi, points)
    return float(np.max(np.abs(g.real(x)) * (1 + x * x)))


@lru_cache(maxsize=128)
def _spec_decay_constant(spec, lo, hi, points):
    x = np.geomspace(lo, hi, points)
    return float(np.max(np.abs(extremal_eval(spec, x)) * (1 + x * x)))


def zero_tail_bound(chi, t, T, C):
    """Bound on sum_{|gamma| > T} |g(t - gamma)| from |g| <= C/(1+x^2) and the zero density."""
    def f(u):
        dens = zero_density(u, chi)
        return C * (dens / (1 + (u - t) ** 2) + dens / (1 + (u + t) ** 2))

    # substitute u = T / s on s in (0, 1]
    def h(s):
        u = T / s
        return f(u) * T / (s * s)

    val, _ = gauss_kronrod(h, 1e-12, 1.0, epsabs=1e-10, limit=2000, initial=8)
    return val


def required_height(chi, t, C, max_tail, T0):
    T = max(T0, abs(t) + 1.0)
    while zero_tail_bound(chi, t, T, C) > max_tail:
        T *= 1.25
        if T > 1e8:
            break
    return T


def zero_tail_estimate(chi, g, t, T, smooth_total):
    """int_{|u|>T} g(t - u) w(u) du = smooth_total - int_{-T}^{T} g(t - u) w(u) du."""
    def f(u):
        return g.real(t - u) * zero_density(u, chi)

    inner, _ = gauss_kronrod(f, -T, T, epsabs=1e-11, limit=8000, initial=max(8, int(2 * T * g.delta)))
    return smooth_total - inner


def gw_evaluate(chi, g, t, zeros, max_tail=1.0, complete_tail=True):
    """Both sides of the explicit formula for g recentred at t.

    ``zeros`` is a ZeroList for chi. The report's residual is
    zero_side - (conductor + archimedean - prime_side).
    """
    g = _as_band_limited(g)
    T = float(zeros.height)
    if zeros.q != chi.q or zeros.label != chi.label:
        raise ValueError(f"zero list is for chi_{zeros.q}.{zeros.label}, not {chi.name}")
    C = 2.0 * empirical_decay_constant(g)
    bound = zero_tail_bound(chi, t, T, C) if T > abs(t) else math.inf
    if bound > max_tail:
        need = required_height(chi, t, C, max_tail, T)
        raise InsufficientZerosError(
            f"zero list to height {T} leaves tail bound {bound:.3g} > {max_tail:.3g}",
            required_height=need,
        )
    gam = zeros.array
    vals = g.real(t - gam) if len(gam) else np.zeros(0)
    zero_sum = math.fsum(vals.tolist())
    cond = conductor_term(chi, g)
    arch = archimedean_term(chi, g, t)
    tail = zero_tail_estimate(chi, g, t, T, cond + arch) if complete_tail else 0.0
    prime, imag, n_max = prime_side(chi, g, t)
    zero_side = zero_sum + tail
    residual = zero_side - (cond + arch - prime)
    return GWReport(
        zero_side=zero_side, zero_sum=zero_sum, zero_tail_estimate=tail,
        conductor_term=cond, archimedean_term=arch, prime_side=prime,
        prime_imag_residue=imag, residual=residual, tail_bound=bound, n_max=n_max,
        zero_count=len(gam), height=T, t=float(t), character=chi.name,
        test_function=g.label, decay_constant=C,
    )
