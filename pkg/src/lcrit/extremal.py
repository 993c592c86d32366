"""Band-limited majorants and minorants for three target families.

Targets (beta = sigma - 1/2, c = 3/2 - sigma = 1 - beta):

    LOG      f(x) = log((1 + x^2) / (beta^2 + x^2))
    ODD      f(x) = (1/2) int_sigma^{3/2} (u - sigma)^{2m} log((1 + x^2)/((u - 1/2)^2 + x^2)) du
    POISSON  h(x) = beta / (beta^2 + x^2)

The extremal functions are given through their Fourier transforms
(hat g(xi) = int g(x) e^{-2 pi i x xi} dx), which are even, continuous and
supported in [-Delta, Delta]; values on the real line come from a cosine
transform of those formulas.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy.special import gammainc, sici

from .config import tol
from .errors import AccuracyError, DomainError, MajorantViolation
from .quadrature import gauss_kronrod, gauss_legendre, gl_panels

SERIES_TOL = 1e-16
XI_ZERO = 1e-8  # below this |xi| the LOG/ODD transforms use the xi = 0 closed form


class Kind(str, enum.Enum):
    LOG = "log"
    ODD = "odd"
    POISSON = "poisson"


@dataclass(frozen=True)
class ExtremalSpec:
    kind: Kind
    sign: int  # +1 majorant, -1 minorant
    sigma: float
    delta: float
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        if not 0.5 < self.sigma < 1:
            raise DomainError("sigma must lie in (1/2, 1)")
        if self.delta < 0.02:
            raise DomainError("Delta must be >= 0.02")
        if self.m < 0 or int(self.m) != self.m:
            raise DomainError("m must be a non-negative integer")

    @classmethod
    def poisson(cls, sign, beta, delta):
        return cls(Kind.POISSON, sign, beta + 0.5, delta)

    @property
    def beta(self):
        return self.sigma - 0.5

    @property
    def omega(self):
        """|log(sigma - 1/2)|."""
        return abs(math.log(self.beta))

    @property
    def label(self):
        s = "plus" if self.sign > 0 else "minus"
        extra = f",m={self.m}" if self.kind is Kind.ODD else ""
        return f"{self.kind.value}/{s}(sigma={self.sigma},Delta={self.delta}{extra})"

    @cached_property
    def series_terms(self):
        """K with the |k| > K part of the k-series below SERIES_TOL."""
        r = math.exp(-2 * math.pi * self.delta * self.beta)
        K = 1
        while (K + 2) * r**K / (self.delta * (1 - r) ** 2) > SERIES_TOL:
            K += 1
        return K


# -- targets -------------------------------------------------------------------

def _odd_weight_poly(beta, m):
    """Coefficients (ascending) of (w - beta)^{2m+1} w / (2m+1)."""
    p = np.polynomial.polynomial.polypow([-beta, 1.0], 2 * m + 1)
    return np.polynomial.polynomial.polymulx(p) / (2 * m + 1)


def _odd_target_closed(x, beta, m):
    """int_beta^1 P(w)/(w^2 + x^2) dw by polynomial division (|x| <= 1)."""
    P = _odd_weight_poly(beta, m)
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        x2 = xi * xi
        q, r = np.polynomial.polynomial.polydiv(P, [x2, 0.0, 1.0])
        r = np.concatenate([r, [0.0, 0.0]])[:2]
        Q = np.polynomial.polynomial.polyint(q)
        poly = np.polynomial.polynomial.polyval(1.0, Q) - np.polynomial.polynomial.polyval(beta, Q)
        logpart = 0.5 * r[1] * (math.log1p(x2) - math.log(beta * beta + x2))
        # int dw/(w^2+x^2) over [beta,1] = arctan(x(1-beta)/(x^2+beta))/x
        if xi == 0.0:
            atan = (1 - beta) / beta
        else:
            atan = math.atan(abs(xi) * (1 - beta) / (x2 + beta)) / abs(xi)
        out[i] = poly + logpart + r[0] * atan
    return out


def _odd_target_quad(x, beta, m, order=48, panels=4):
    w, wt = gl_panels(beta, 1.0, panels, order)
    P = np.polynomial.polynomial.polyval(w, _odd_weight_poly(beta, m))
    return (P[None, :] / (w[None, :] ** 2 + x[:, None] ** 2)) @ wt


def target_eval(spec, x, method="auto"):
    """Target function of ``spec`` at real ``x`` (vectorized)."""
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = np.atleast_1d(x).ravel()
    b = spec.beta
    if spec.kind is Kind.LOG:
        out = np.log1p((1 - b * b) / (b * b + x * x))
    elif spec.kind is Kind.POISSON:
        out = b / (b * b + x * x)
    else:
        if method == "closed":
            out = _odd_target_closed(x, b, spec.m)
        elif method == "quad":
            out = _odd_target_quad(x, b, spec.m)
        else:
            out = np.empty_like(x)
            small = np.abs(x) <= 1
            if small.any():
                out[small] = _odd_target_closed(x[small], b, spec.m)
            if (~small).any():
                out[~small] = _odd_target_quad(x[~small], b, spec.m)
    return out.reshape(shape)


def target_integral(spec):
    """int_R f(x) dx."""
    b = spec.beta
    if spec.kind is Kind.LOG:
        return 2 * math.pi * (1 - b)
    if spec.kind is Kind.POISSON:
        return math.pi
    c = 1 - b
    m = spec.m
    return math.pi * c ** (2 * m + 2) / ((2 * m + 1) * (2 * m + 2))


def target_integral_window(spec, X):
    """int_{-X}^{X} f(x) dx from antiderivatives."""
    b = spec.beta

    def logsq(a):  # int_{-X}^{X} log(x^2 + a^2) dx
        return 2 * (X * math.log(X * X + a * a) - 2 * X + 2 * a * math.atan(X / a))

    if spec.kind is Kind.POISSON:
        return 2 * math.atan(X / b)
    if spec.kind is Kind.LOG:
        return logsq(1.0) - logsq(b)
    x, wt = gauss_legendre(64)
    c = 1 - b
    v = 0.5 * c * (x + 1)
    inner = np.array([logsq(1.0) - logsq(vv + b) for vv in v])
    return 0.5 * 0.5 * c * float(np.sum(wt * v ** (2 * spec.m) * inner))


def target_asymptotic_coefficient(spec):
    """a with f(x) ~ a / x^2 as |x| -> infinity."""
    b = spec.beta
    if spec.kind is Kind.LOG:
        return 1 - b * b
    if spec.kind is Kind.POISSON:
        return b
    P = np.polynomial.polynomial.polyint(_odd_weight_poly(b, spec.m))
    return float(np.polynomial.polynomial.polyval(1.0, P) - np.polynomial.polynomial.polyval(b, P))


# -- Fourier transforms --------------------------------------------------------------

def _odd_bracket(y, beta, m):
    """int_0^c v^{2m} e^{-y(beta+v)} (1 - e^{-y(c-v)}) dv for y > 0 (array)."""
    c = 1 - beta
    out = np.empty_like(y)
    small = y * c <= 1.0
    if small.any():
        xg, wg = gauss_legendre(32)
        v = 0.5 * c * (xg + 1)
        ys = y[small][:, None]
        integrand = v ** (2 * m) * np.exp(-ys * (beta + v)) * (-np.expm1(-ys * (c - v)))
        out[small] = 0.5 * c * integrand @ wg
    big = ~small
    if big.any():
        yb = y[big]
        n = 2 * m + 1
        first = math.factorial(2 * m) * gammainc(n, yb * c) * np.exp(-yb * beta - n * np.log(yb))
        out[big] = first - np.exp(-yb) * c**n / n
    return out


def _term_values(spec, y):
    """Per-term factor multiplying (±1)^k (k+1) 2 pi; y = 2 pi |xi + k Delta| > 0."""
    b = spec.beta
    if spec.kind is Kind.LOG:
        return np.exp(-y * b) * (-np.expm1(-y * (1 - b))) / y
    return 0.5 * _odd_bracket(y, b, spec.m) / y


def _k0_limit(spec):
    # xi -> 0 limit of the k = 0 term
    return target_integral(spec)


def _series(spec, xi, include_k0=True):
    """k-series for 0 < xi < Delta (array xi)."""
    K = spec.series_terms
    k = np.arange(-K, K + 1)
    k = k[k != -1]
    if not include_k0:
        k = k[k != 0]
    d = spec.delta
    arg = np.abs(xi[:, None] + k[None, :] * d)
    y = 2 * math.pi * arg
    sgn = np.where(k % 2 == 0, 1.0, float(spec.sign))
    vals = _term_values(spec, y.ravel()).reshape(y.shape)
    terms = sgn[None, :] * (k[None, :] + 1) * 2 * math.pi * vals
    # sum small terms first
    order = np.argsort(-np.abs(k))
    return terms[:, order].sum(axis=1)


def closed_form_at_zero(spec):
    """hat g(0) in closed form (LOG, ODD) or from the POISSON formula."""
    d, b, s = spec.delta, spec.beta, spec.sign
    if spec.kind is Kind.POISSON:
        return poisson_transform(spec, np.array([0.0]))[0]
    if spec.kind is Kind.LOG:
        num = -np.expm1(-(2 * spec.sigma - 1) * math.pi * d) if s > 0 else 1 + math.exp(-(2 * spec.sigma - 1) * math.pi * d)
        den = -np.expm1(-2 * math.pi * d) if s > 0 else 1 + math.exp(-2 * math.pi * d)
        return 2 * math.pi * (1.5 - spec.sigma) - (2 / d) * math.log(num / den)
    m, c = spec.m, 1 - b
    x, wt = gl_panels(0.0, c, 8, 32)  # v = u - sigma
    e = np.exp(-2 * math.pi * (x + b) * d)
    e0 = math.exp(-2 * math.pi * d)
    if s > 0:
        logs = np.log(-np.expm1(-2 * math.pi * (x + b) * d)) - math.log(-math.expm1(-2 * math.pi * d))
    else:
        logs = np.log1p(e) - math.log1p(e0)
    integral = float(np.sum(wt * x ** (2 * m) * logs))
    return math.pi * c ** (2 * m + 2) / ((2 * m + 1) * (2 * m + 2)) - integral / d


def series_limit_at_zero(spec):
    """k-series at xi = 0 with the k = 0 term replaced by its limit."""
    if spec.kind is Kind.POISSON:
        raise DomainError("POISSON transform has no k-series")
    return _k0_limit(spec) + float(_series(spec, np.array([0.0]), include_k0=False)[0])


def series_richardson_at_zero(spec, xis=(1e-4, 5e-5, 2.5e-5)):
    """Series at small positive xi extrapolated to xi = 0 (error O(xi^3))."""
    v = _series(spec, np.asarray(xis, dtype=float))
    a1 = 2 * v[1] - v[0], 2 * v[2] - v[1]
    return float((4 * a1[1] - a1[0]) / 3)


def poisson_transform(spec, xi):
    b, d = spec.beta, spec.delta
    a = np.clip(d - np.abs(xi), 0.0, None)
    num = 2 * np.sinh(2 * math.pi * b * a)
    den = math.exp(math.pi * b * d) - spec.sign * math.exp(-math.pi * b * d)
    return math.pi * num / den**2


def extremal_fourier(spec, xi):
    """hat g(xi) for the spec (vectorized); exactly 0 for |xi| >= Delta."""
    xi = np.asarray(xi, dtype=float)
    shape = xi.shape
    a = np.abs(np.atleast_1d(xi).ravel())
    out = np.zeros_like(a)
    inside = a < spec.delta
    if spec.kind is Kind.POISSON:
        out[inside] = poisson_transform(spec, a[inside])
        return out.reshape(shape)
    near0 = inside & (a < XI_ZERO)
    mid = inside & ~near0
    if near0.any():
        out[near0] = closed_form_at_zero(spec)
    if mid.any():
        out[mid] = _series(spec, a[mid])
    return out.reshape(shape)


# -- real line ----------------------------------------------------------------------

@lru_cache(maxsize=256)
def _weighted_nodes(spec, panels):
    # hat g on the composite rule, reused across calls (read-only)
    nodes, wts = gl_panels(0.0, spec.delta, panels, 16)
    wg = wts * extremal_fourier(spec, nodes)
    wg.setflags(write=False)
    return nodes, wg


def _inversion(spec, x, panels):
    nodes, wg = _weighted_nodes(spec, panels)
    out = np.empty(len(x))
    step = max(1, (1 << 22) // len(nodes))  # bound the cosine matrix size
    for i in range(0, len(x), step):
        out[i:i + step] = 2 * np.cos(2 * math.pi * np.outer(x[i:i + step], nodes)) @ wg
    return out


def extremal_eval(spec, x, rtol=None, max_panels=1 << 14):
    """g(x) = 2 int_0^Delta hat g(xi) cos(2 pi xi x) d xi, panel doubling to convergence."""
    rtol = tol("inversion") if rtol is None else rtol
    x = np.asarray(x, dtype=float)
    shape = x.shape
    xs = np.atleast_1d(x).ravel()
    xmax = float(np.max(np.abs(xs))) if xs.size else 0.0
    panels = max(4, int(math.ceil(spec.delta * xmax / 2)))
    prev = _inversion(spec, xs, panels)
    while True:
        panels *= 2
        cur = _inversion(spec, xs, panels)
        diff = float(np.max(np.abs(cur - prev))) if xs.size else 0.0
        scale = max(1.0, float(np.max(np.abs(cur)))) if xs.size else 1.0
        if diff <= rtol * scale:
            return cur.reshape(shape)
        if panels >= max_panels:
            raise AccuracyError(f"Fourier inversion not converged (change {diff:.2e})", diff)
        prev = cur


def window_integral(spec, X):
    """int_{-X}^{X} g(x) dx = 4 int_0^Delta hat g(xi) sin(2 pi X xi)/(2 pi xi) d xi."""
    panels = max(8, int(math.ceil(spec.delta * X)))
    nodes, wts = gl_panels(0.0, spec.delta, panels, 16)
    ghat = extremal_fourier(spec, nodes)
    kern = np.sin(2 * math.pi * X * nodes) / (2 * math.pi * nodes)
    return 4 * float(np.sum(wts * ghat * kern))


def tail_integral(spec, X):
    """int_{|x|>X} g(x) dx, computed in the Fourier domain.

    Uses (2/pi) int_0^inf sin(a xi)/xi d xi = 1 to write the tail as
    4 int_0^inf (hat g(0) 1 - hat g(xi) 1_{xi<Delta}) sin(2 pi X xi)/(2 pi xi) d xi.
    """
    g0 = float(extremal_fourier(spec, np.array([0.0]))[0])
    panels = max(8, int(math.ceil(4 * spec.delta * X)))
    nodes, wts = gl_panels(0.0, spec.delta, panels, 16)
    ghat = extremal_fourier(spec, nodes)
    kern = np.sin(2 * math.pi * X * nodes) / (2 * math.pi * nodes)
    inner = 4 * float(np.sum(wts * (g0 - ghat) * kern))
    si, _ = sici(2 * math.pi * X * spec.delta)
    return inner + 4 * g0 / (2 * math.pi) * (math.pi / 2 - float(si))


@dataclass(frozen=True)
class L1Report:
    spec: ExtremalSpec
    real_space: float
    fourier: float
    window: float
    min_gap: float

    @property
    def discrepancy(self):
        return abs(self.real_space - self.fourier)


def l1_distance(spec, X=30.0, slack=-1e-9):
    """int |g - f| two ways: real-space quadrature vs |hat g(0) - int f|.

    The real-space route integrates |g - f| over [-X, X] adaptively and adds
    the exterior part sign * (int_{|x|>X} g - int_{|x|>X} f), valid because
    g - f is one-signed.
    """
    s = spec.sign
    mins = [math.inf]

    def gap(x):
        gx = extremal_eval(spec, x)
        fx = target_eval(spec, x)
        d = s * (gx - fx)
        mins[0] = min(mins[0], float(np.min(d)))
        return np.abs(gx - fx)

    inner, _ = gauss_kronrod(gap, 0.0, X, epsabs=1e-11, limit=4000, initial=max(8, int(X)))
    if mins[0] < slack:
        raise MajorantViolation(f"{spec.label}: sign violation {mins[0]:.3e}", worst=mins[0])
    tail_f = target_integral(spec) - target_integral_window(spec, X)
    tail_g = tail_integral(spec, X)
    real_space = 2 * inner + s * (tail_g - tail_f)
    fourier = abs(float(extremal_fourier(spec, np.array([0.0]))[0]) - target_integral(spec))
    return L1Report(spec, real_space, fourier, 2 * inner, mins[0])


def interleaving_gap(spec, x):
    """sign * (g - f) on a grid; nonnegative for a valid majorant/minorant."""
    return spec.sign * (extremal_eval(spec, x) - target_eval(spec, x))


def decay_constant(spec, x):
    """Empirical sup of |g(x)| (1 + x^2) over the grid."""
    return float(np.max(np.abs(extremal_eval(spec, x)) * (1 + np.asarray(x) ** 2)))
