"""Critical-line zeros of Lambda(s, chi).

Zeros are located as sign changes of the rotated function

    Z(t) = kappa^{-1/2} e^{i theta(t)} L(1/2 + it, chi),
    theta(t) = arg(q^{s/2} Gamma_R(s + a)) at s = 1/2 + it,

which is kappa^{-1/2} Lambda(1/2 + it) divided by the positive number
|q^{s/2} Gamma_R(s + a)|; it is real and of the size of |L|. Completeness is
certified by counting zeros of Lambda in boxes with the argument principle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import IncompleteZeroListError, NumericHealthError, ZeroFileError
from .gamma import gamma_r_log_deriv
from .lfunc import eval_L_and_prime_many, eval_L_many, log_gamma_factor

REALNESS_TOL = 1e-8
DEFAULT_STEP = 0.05
MULTIPLICITY_FLAG = 1e-6


@dataclass(frozen=True)
class RotatedValue:
    t: float
    value: float
    imag_residue: float


@dataclass(frozen=True)
class ZeroList:
    q: int
    label: int
    ordinates: tuple
    height: float
    source: str = field(default="computed", compare=False)
    accuracies: tuple = field(default=(), compare=False)
    flagged: tuple = field(default=(), compare=False)  # ordinates with tiny |Z'|

    def __post_init__(self):
        g = np.asarray(self.ordinates, dtype=float)
        if len(g) > 1 and not np.all(np.diff(g) > 0):
            raise ValueError("ordinates must be strictly increasing")

    def __len__(self):
        return len(self.ordinates)

    @property
    def array(self):
        return np.asarray(self.ordinates, dtype=float)

    @property
    def accuracy(self):
        return max(self.accuracies) if self.accuracies else 0.0

    def restricted(self, height):
        """The sub-list with |gamma| <= height."""
        if height > self.height:
            raise ValueError(f"list only covers |gamma| <= {self.height}")
        keep = [i for i, g in enumerate(self.ordinates) if abs(g) <= height]
        acc = tuple(self.accuracies[i] for i in keep) if self.accuracies else ()
        return ZeroList(self.q, self.label, tuple(self.ordinates[i] for i in keep), height,
                        self.source, acc, tuple(g for g in self.flagged if abs(g) <= height))


# -- rotated function ---------------------------------------------------------

def rotated_Z_many(t, chi):
    """Complex values of Z on an array of heights (imaginary part ~ 0)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = 0.5 + 1j * t
    theta = log_gamma_factor(s, chi).imag
    return chi.sqrt_root_number_inv * np.exp(1j * theta) * eval_L_many(s, chi)


def rotated_Z(t, chi, check=True):
    """Z(t) with its imaginary residue; raises NumericHealthError on drift."""
    z = complex(rotated_Z_many([t], chi)[0])
    if check and abs(z.imag) > REALNESS_TOL * (1 + abs(z.real)):
        raise NumericHealthError(f"Z({t}) has imaginary residue {z.imag:.3e}")
    return RotatedValue(float(t), z.real, z.imag)


def _Z_real(t, chi):
    return float(rotated_Z_many([t], chi)[0].real)


def _Z_prime(t, chi):
    # d/dt of Re Z via L' and theta' = Im d/dt log(gamma factor)
    s = np.array([0.5 + 1j * t])
    L, dL, _ = eval_L_and_prime_many(s, chi)
    theta = log_gamma_factor(s, chi).imag
    dtheta = (0.5 * math.log(chi.q) + gamma_r_log_deriv(s + chi.parity)).real
    rot = chi.sqrt_root_number_inv * np.exp(1j * theta)
    dz = rot * (1j * dtheta * L + 1j * dL)
    return float(dz[0].real)


# -- argument principle --------------------------------------------------------

def _arg_along(chi, height, sigma_right, sigma_left=0.5, max_points=1 << 16):
    """Continuous arg L(sigma + i height) from sigma_right down to sigma_left."""
    n = 64
    while True:
        sig = np.linspace(sigma_right, sigma_left, n + 1)
        L = eval_L_many(sig + 1j * height, chi)
        inc = np.angle(L[1:] / L[:-1])
        if np.max(np.abs(inc)) < math.pi / 8 or n >= max_points:
            break
        n *= 2
    if np.max(np.abs(inc)) >= math.pi / 4:
        raise NumericHealthError(f"argument tracking failed at height {height}")
    start = cmath.phase(L[0])
    return start + float(np.sum(inc))


def argument_count(chi, a, b, sigma_right=2.5):
    """Number of zeros of Lambda with a < gamma < b (argument principle).

    Uses Delta arg Lambda along 1/2+ia -> sigma_right+ia -> sigma_right+ib ->
    1/2+ib; the functional equation makes the left half contribute equally,
    so the count is that change divided by pi. Returns (count, raw value).
    """
    theta = log_gamma_factor(np.array([0.5 + 1j * a, 0.5 + 1j * b]), chi).imag
    arg_b = _arg_along(chi, b, sigma_right)
    arg_a = _arg_along(chi, a, sigma_right)
    raw = (theta[1] - theta[0] + arg_b - arg_a) / math.pi
    n = int(round(raw))
    if abs(raw - n) > 0.1:
        raise NumericHealthError(f"argument-principle count {raw:.4f} is not near an integer")
    return n, raw


def completed_log_deriv(s, chi):
    """Lambda'/Lambda(s) = L'/L + (log q)/2 + Gamma_R'/Gamma_R(s + a)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    L, dL, _ = eval_L_and_prime_many(s, chi)
    return dL / L + 0.5 * math.log(chi.q) + gamma_r_log_deriv(s + chi.parity)


def contour_zero_moments(chi, center, radius, nodes=256):
    """(count, sum of zeros) inside a circle via trapezoidal contour integrals.

    count = (1/2 pi i) oint Lambda'/Lambda ds, sum = (1/2 pi i) oint s Lambda'/Lambda ds.
    Independent of the sign-change machinery; used to cross-check ordinates.
    """
    phi = 2 * math.pi * np.arange(nodes) / nodes
    w = radius * np.exp(1j * phi)
    s = center + w
    f = completed_log_deriv(s, chi)
    # ds = i w dphi
    count = np.mean(f * w)
    total = np.mean(f * w * s)
    return count, total


# -- zero finding --------------------------------------------------------------

def _scan(chi, lo, hi, step):
    n = max(2, int(math.ceil((hi - lo) / step)))
    t = np.linspace(lo, hi, n + 1)
    z = rotated_Z_many(t, chi)
    bad = np.abs(z.imag) > REALNESS_TOL * (1 + np.abs(z.real))
    if bad.any():
        raise NumericHealthError(f"Z imaginary residue too large near t = {t[bad][0]}")
    return t, z.real


def _refine(chi, a, b, xtol):
    g = brentq(_Z_real, a, b, args=(chi,), xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    return g


def find_zeros(chi, T, grid_step=DEFAULT_STEP, xtol=1e-12, max_halvings=4):
    """All zeros of Lambda(s, chi) with |gamma| <= T, certified complete.

    Scans Z on a grid, refines each sign change by Brent's method
    (bisection + secant/inverse quadratic steps) and compares the count with
    the argument principle; on mismatch the step is halved.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    step = grid_step
    # nudge the window edges off any zero sitting exactly on them
    target, raw = argument_count(chi, -T, T)
    for _ in range(max_halvings + 1):
        t, z = _scan(chi, -T, T, step)
        sgn = np.sign(z)
        idx = np.flatnonzero(sgn[:-1] * sgn[1:] < 0)
        exact = np.flatnonzero(sgn == 0)
        found = []
        for i in idx:
            found.append(_refine(chi, t[i], t[i + 1], xtol))
        found.extend(t[exact].tolist())
        found = sorted(found)
        if len(found) == target:
            break
        step /= 2
    else:
        gap = _locate_gap(chi, T, found)
        raise IncompleteZeroListError(
            f"{len(found)} sign changes but argument principle counts {target}",
            gap=gap, counted=target, found=len(found),
        )
    acc, flagged = [], []
    for g in found:
        dz = _Z_prime(g, chi)
        zval = _Z_real(g, chi)
        acc.append(max(xtol, abs(zval / dz) if dz else xtol))
        if abs(dz) < MULTIPLICITY_FLAG:
            flagged.append(g)
    return ZeroList(chi.q, chi.label, tuple(found), float(T), "computed", tuple(acc), tuple(flagged))


def _locate_gap(chi, T, found, width=10.0):
    edges = np.arange(-T, T + width, width)
    edges[-1] = T
    found = np.asarray(found)
    for a, b in zip(edges[:-1], edges[1:]):
        n, _ = argument_count(chi, a, b)
        if n != np.count_nonzero((found > a) & (found < b)):
            return (float(a), float(b))
    return (-float(T), float(T))


def sign_change_count(chi, T, step=DEFAULT_STEP):
    t, z = _scan(chi, -T, T, step)
    return int(np.count_nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0))


# -- zero files ----------------------------------------------------------------

def export_zeros(zeros, path):
    lines = [
        f"# modulus: {zeros.q}",
        f"# character: {zeros.label}",
        f"# height: {zeros.height!r}",
        f"# accuracy: {zeros.accuracy!r}",
    ]
    lines += [repr(float(g)) for g in zeros.ordinates]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def import_zeros(path, chi=None):
    """Parse a zero file; checks header, monotonicity and (optionally) chi."""
    header = {}
    ordinates = []
    prev = -math.inf
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if ordinates:
                    raise ZeroFileError("header line after data", lineno)
                key, sep, value = line[1:].partition(":")
                if not sep:
                    raise ZeroFileError(f"malformed header {line!r}", lineno)
                header[key.strip()] = (value.strip(), lineno)
                continue
            try:
                g = float(line)
            except ValueError:
                raise ZeroFileError(f"not a number: {line!r}", lineno) from None
            if not g > prev:
                raise ZeroFileError("ordinates must be strictly increasing", lineno)
            prev = g
            ordinates.append(g)
    required = ("modulus", "character", "height", "accuracy")
    for key in required:
        if key not in header:
            raise ZeroFileError(f"missing header '# {key}:'", 1)
    try:
        q = int(header["modulus"][0])
        label = int(header["character"][0])
        height = float(header["height"][0])
        acc = float(header["accuracy"][0])
    except ValueError as exc:
        raise ZeroFileError(f"malformed header value ({exc})", 1) from None
    if chi is not None and (chi.q != q or chi.label != label):
        line = header["modulus"][1] if chi.q != q else header["character"][1]
        raise ZeroFileError(f"file is for chi_{q}.{label}, requested {chi.name}", line)
    for g in ordinates:
        if abs(g) > height:
            raise ZeroFileError(f"ordinate {g} exceeds declared height {height}")
    return ZeroList(q, label, tuple(ordinates), height, "imported", (acc,) * len(ordinates))
