import math

import numpy as np
import pytest

from lcrit.errors import InsufficientZerosError
from lcrit.explicit_formula import (
    BandLimited,
    archimedean_term,
    archimedean_term_real_space,
    conductor_term,
    gw_evaluate,
    prime_side,
    zero_tail_bound,
)
from lcrit.extremal import ExtremalSpec, Kind


def fejer(delta):
    """(sin(pi Delta x)/(pi x))^2, with hat g(xi) = max(0, Delta - |xi|)."""
    def real(x):
        x = np.asarray(x, dtype=float)
        safe = np.where(np.abs(x) < 1e-8, 1.0, x)
        v = (np.sin(math.pi * delta * safe) / (math.pi * safe)) ** 2
        return np.where(np.abs(x) < 1e-8, delta * delta, v)

    return BandLimited(lambda xi: np.clip(delta - np.abs(np.asarray(xi, dtype=float)), 0.0, None),
                       real, delta, "fejer")


@pytest.mark.parametrize("t", [0.0, 7.5])
def test_fejer_balance(chi4, zeros4_60, t):
    rep = gw_evaluate(chi4, fejer(1.0), t, zeros4_60)
    assert abs(rep.residual) < 1e-4
    assert rep.tail_bound < 0.1


def test_fejer_balance_complex_character(chi5s):
    from lcrit.zeros import find_zeros

    chi = chi5s[0]
    rep = gw_evaluate(chi, fejer(0.8), 3.0, find_zeros(chi, 60.0))
    assert abs(rep.residual) < 1e-4
    assert rep.prime_imag_residue == pytest.approx(0.0, abs=1e-12)


def test_extremal_balance(chi4, zeros4_60):
    spec = ExtremalSpec(Kind.ODD, -1, 0.75, 1.0)
    rep = gw_evaluate(chi4, spec, 5.0, zeros4_60)
    assert abs(rep.residual) < 5e-3
    assert rep.n_max == math.floor(math.exp(2 * math.pi))
    assert rep.zero_count == len(zeros4_60)


def test_conductor_term(chi4):
    assert conductor_term(chi4, fejer(1.0)) == pytest.approx(math.log(4) / (2 * math.pi))


@pytest.mark.parametrize("t", [0.0, 5.0])
def test_archimedean_routes(chi4, t):
    g = BandLimited.from_spec(ExtremalSpec(Kind.LOG, 1, 0.75, 1.0))
    # the real-space route models the exterior by A/x^2, good to about 1e-3
    assert abs(archimedean_term(chi4, g, t) - archimedean_term_real_space(chi4, g, t)) < 2e-3
    f = fejer(1.0)
    assert abs(archimedean_term(chi4, f, t) - archimedean_term_real_space(chi4, f, t)) < 2e-3


def test_prime_side_small_support(chi4):
    # e^{2 pi Delta} < 2: no prime powers inside the support
    assert prime_side(chi4, fejer(0.1), 0.0) == (0.0, 0.0, 1)


def test_prime_side_by_hand(chi4):
    # Delta = 0.25: n_max = 4, terms n = 2 (chi = 0), 3 (chi = -1), 4 (chi = 0)
    g = fejer(0.25)
    val, _, n_max = prime_side(chi4, g, 0.0)
    ref = (1 / (2 * math.pi)) * 2 * (-math.log(3)) / math.sqrt(3) * (0.25 - math.log(3) / (2 * math.pi))
    assert n_max == 4
    assert val == pytest.approx(ref, abs=1e-15)


def test_linearity(chi4, zeros4_60):
    a, b = fejer(1.0), fejer(0.5)
    c = a.combine(2.0, b, -1.0)
    ra, rb, rc = (gw_evaluate(chi4, g, 4.0, zeros4_60) for g in (a, b, c))
    assert rc.zero_sum == pytest.approx(2 * ra.zero_sum - rb.zero_sum, abs=1e-12)
    assert rc.prime_side == pytest.approx(2 * ra.prime_side - rb.prime_side, abs=1e-12)


def test_insufficient_zeros(chi4, zeros4_60):
    short = zeros4_60.restricted(5.0)
    with pytest.raises(InsufficientZerosError) as exc:
        gw_evaluate(chi4, fejer(1.0), 10.0, short)
    assert exc.value.required_height > 10.0


def test_tail_bound_decreases(chi4):
    vals = [zero_tail_bound(chi4, 0.0, T, 1.0) for T in (20, 40, 80)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_wrong_character(chi3, zeros4_60):
    with pytest.raises(ValueError):
        gw_evaluate(chi3, fejer(1.0), 0.0, zeros4_60)
