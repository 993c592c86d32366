"""Envelope functions for log|L| and the iterates S_n in the critical strip.

With C = C(t, chi), L = log C, LL = log log C, X = L^{1 - 2 sigma} and
D = d (2 sigma - 1)/(sigma (1 - sigma)):

    log|L|     M^{+-} = (H_1(-+X) + D)/2
    n odd      M^{+-} = (H_{n+1}(+-(-1)^{(n+1)/2} X) + D)/(2^{n+1} pi)
    n = -1     M^{+-} = (H_0(+-X) + D)/pi
    n = 0      M      = sqrt(2 (M_1^+ + M_1^-) M_{-1}^-)
    n >= 2 even M     = sqrt(2 (M_{n+1}^+ + M_{n+1}^-) M_{n-1}^+ M_{n-1}^- / (M_{n-1}^+ + M_{n-1}^-))

and main term M * ell_{n+1}, ell_k = L^{2-2 sigma}/LL^k, error scale
mu * r_{n+2}, r_k = d L^{2-2 sigma}/((1 - sigma)^2 LL^k).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .config import tol
from .errors import AccuracyError, DomainError
from .lfunc import analytic_conductor

LOG = "log"
DEFAULT_C = 0.1


def H(n, x, eps=None):
    """H_n(x) = sum_{k>=0} x^k/(k+1)^n for |x| < 1."""
    if n < 0:
        raise DomainError("H_n needs n >= 0")
    if not abs(x) < 1:
        raise DomainError("H_n(x) needs |x| < 1")
    eps = tol("series") if eps is None else eps
    ax = abs(x)
    if ax == 0:
        return 1.0
    # remainder after K terms is at most |x|^K / (1 - |x|)
    K = max(1, int(math.ceil(math.log(eps * (1 - ax)) / math.log(ax))))
    if K > 10**7:
        raise AccuracyError(f"H_{n}({x}) needs {K} terms", None)
    terms = [x**k / (k + 1) ** n for k in range(K + 1)]
    return math.fsum(terms)


def omega(n):
    """1 for odd n (and n = -1), sqrt 2 for even n."""
    return 1.0 if n % 2 else math.sqrt(2.0)


@dataclass(frozen=True)
class EnvelopeParams:
    n: object  # int >= -1, or "log"
    sigma: float
    t: float
    q: int
    parity: int
    d: int = 1
    c: float = DEFAULT_C

    @classmethod
    def for_character(cls, n, sigma, t, chi, c=DEFAULT_C):
        return cls(n, sigma, t, chi.q, chi.parity, chi.degree, c)

    @property
    def C(self):
        return self.q * (abs(self.parity + 1j * self.t) + 3.0)

    @property
    def logC(self):
        return math.log(self.C)

    @property
    def loglogC(self):
        return math.log(self.logC)

    @property
    def X(self):
        return self.logC ** (1 - 2 * self.sigma)

    @property
    def D(self):
        s = self.sigma
        return self.d * (2 * s - 1) / (s * (1 - s))

    @property
    def range_value(self):
        return (1 - self.sigma) ** 2 * self.loglogC

    @property
    def in_range(self):
        return self.range_value >= self.c

    def ell(self, k):
        return self.logC ** (2 - 2 * self.sigma) / self.loglogC**k

    def r(self, k):
        return self.d * self.logC ** (2 - 2 * self.sigma) / ((1 - self.sigma) ** 2 * self.loglogC**k)


@dataclass
class EnvelopeValue:
    n: object
    M_plus: float
    M_minus: float
    mu_plus: float
    mu_minus: float
    ell: float
    r: float
    lam: float | None
    in_range: bool
    case: str


def _check_sigma(sigma):
    if not 0.5 < sigma < 1:
        raise DomainError("sigma must lie strictly between 1/2 and 1")


def _M_pair(n, p):
    """(M^+, M^-) for any case n >= -1 or 'log'."""
    X, D = p.X, p.D
    if n == LOG:
        return 0.5 * (H(1, -X) + D), 0.5 * (H(1, X) + D)
    if n == -1:
        return (H(0, X) + D) / math.pi, (H(0, -X) + D) / math.pi
    if n % 2 == 1:
        s = (-1) ** ((n + 1) // 2)
        scale = 2 ** (n + 1) * math.pi
        return (H(n + 1, s * X) + D) / scale, (H(n + 1, -s * X) + D) / scale
    if n == 0:
        p1, m1 = _M_pair(1, p)
        _, mm1 = _M_pair(-1, p)
        v = math.sqrt(2 * (p1 + m1) * mm1)
        return v, v
    hi_p, hi_m = _M_pair(n + 1, p)
    lo_p, lo_m = _M_pair(n - 1, p)
    v = math.sqrt(2 * (hi_p + hi_m) * lo_p * lo_m / (lo_p + lo_m))
    return v, v


def case_name(n):
    if n == LOG:
        return "log"
    if n == -1:
        return "n=-1"
    if n == 0:
        return "n=0"
    return "odd" if n % 2 else "even"


def lam(p):
    """lambda_sigma(t) = sqrt(2 (M_1^- + M_1^+) / M_{-1}^-)."""
    p1, m1 = _M_pair(1, p)
    _, mm1 = _M_pair(-1, p)
    return math.sqrt(2 * (p1 + m1) / mm1)


def envelope(n, sigma, t, chi, c=DEFAULT_C):
    """EnvelopeValue for case ``n`` (integer >= -1 or 'log')."""
    _check_sigma(sigma)
    if n != LOG and (not isinstance(n, int) or n < -1):
        raise DomainError(f"unsupported case {n!r}; expected 'log' or an integer >= -1")
    p = EnvelopeParams.for_character(n, sigma, t, chi, c)
    if p.logC <= 1:
        raise DomainError("analytic conductor too small (log log C <= 0)")
    Mp, Mm = _M_pair(n, p)
    if n == LOG:
        mu_p, mu_m = 1.0, abs(math.log(sigma - 0.5)) / (sigma - 0.5)
        k = 0
    elif n == -1:
        mu_p, mu_m = (sigma - 0.5) ** -1, (sigma - 0.5)
        k = -1
    elif n % 2 == 1:
        mu_p = mu_m = 1.0
        k = n
    else:
        mu_p = mu_m = (2 * sigma - 1) * p.d + 1
        k = n
    return EnvelopeValue(
        n=n, M_plus=Mp, M_minus=Mm, mu_plus=mu_p, mu_minus=mu_m,
        ell=p.ell(k + 1), r=p.r(k + 2), lam=lam(p) if n == 0 else None,
        in_range=p.in_range, case=case_name(n),
    )


def corollary_envelope(n, sigma, t, chi):
    """Leading-order envelope (omega_n/(2^{n+1} pi)) (1 + D) ell_{n+1} (log case: (1 + D)/2 ell_1)."""
    p = EnvelopeParams.for_character(n, sigma, t, chi)
    if n == LOG:
        return 0.5 * (1 + p.D) * p.ell(1)
    return omega(n) / (2 ** (n + 1) * math.pi) * (1 + p.D) * p.ell(n + 1)


@dataclass
class BoundReport:
    n: object
    sigma: float
    t: float
    character: str
    C: float
    value: float
    M_plus: float
    M_minus: float
    ell: float
    r: float
    ratio: float
    upper: float
    lower: float
    corollary: float
    omega: float
    in_range: bool
    case: str
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def theorem_compare(n, sigma, t, chi, value, c=DEFAULT_C):
    """Place a computed S_n (or log|L|) against the envelope.

    ratio = value / (M^{sign} ell) with the sign of ``value``; no pass/fail on
    the bound itself since its error constants are not explicit.
    """
    env = envelope(n, sigma, t, chi, c)
    M = env.M_plus if value >= 0 else env.M_minus
    ratio = value / (M * env.ell)
    if not math.isfinite(ratio):
        raise DomainError("non-finite ratio")
    return BoundReport(
        n=n, sigma=sigma, t=float(t), character=chi.name, C=analytic_conductor(t, chi),
        value=float(value), M_plus=env.M_plus, M_minus=env.M_minus, ell=env.ell, r=env.r,
        ratio=ratio, upper=env.M_plus * env.ell, lower=-env.M_minus * env.ell,
        corollary=corollary_envelope(n, sigma, t, chi),
        omega=omega(n) if n != LOG else 1.0, in_range=env.in_range, case=env.case,
        meta={"mu_plus": env.mu_plus, "mu_minus": env.mu_minus, "lambda": env.lam},
    )
