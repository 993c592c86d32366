import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcrit.errors import DomainError
from lcrit.verify import (
    REGRESSION_PINS,
    REPR_BAND,
    alternating_sum_check,
    alternating_sum_grid,
    log_shift_check,
    log_shift_random,
    prime_sum_asymptotics,
    check_pin,
    pipeline_replay,
    representation_residual,
    tail_identity_closed,
    tail_identity_quad,
)


def alternating_bruteforce(sigma, n, x, K=200):
    mp.mp.dps = 40
    b = mp.mpf(sigma) - mp.mpf(1) / 2
    n, x = mp.mpf(n), mp.mpf(x)
    total = mp.mpf(0)
    for k in range(K + 1):
        a1 = n * x**k
        a2 = x ** (k + 2) / n
        total += (-1) ** k * (k + 1) * (1 / (mp.log(a1) * a1**b) - 1 / (mp.log(a2) * a2**b))
    mp.mp.dps = 15
    return float(total)


@pytest.mark.parametrize("sigma,n,x", [(0.75, 3, 10), (0.6, 2, 100), (0.9, 50, 100), (0.75, 10, 10)])
def test_alternating_sum_against_bruteforce(sigma, n, x):
    r = alternating_sum_check(sigma, n, x)
    assert r.holds()
    assert abs(r.value - alternating_bruteforce(sigma, n, x)) < 1e-14


def test_alternating_sum_boundary_n_equals_x():
    r = alternating_sum_check(0.75, 10.0, 10.0)
    assert math.isfinite(r.upper) and abs(r.upper) < 1e-15 and r.holds()


def test_alternating_sum_sigma_to_one():
    vals = [alternating_sum_check(s, 3, 10).value for s in (0.9, 0.99, 0.999)]
    assert all(v >= -1e-15 for v in vals)
    assert vals[0] > vals[1] > vals[2]


def test_alternating_sum_grid():
    res = alternating_sum_grid()
    assert len(res) > 50 and all(r.holds() for r in res)


def test_alternating_sum_domain():
    with pytest.raises(DomainError):
        alternating_sum_check(0.75, 20, 10)


def test_log_shift_cases():
    assert log_shift_check(0, 0)
    assert log_shift_check(25, -25)
    with pytest.raises(DomainError):
        log_shift_check(1, 30)


@given(st.complex_numbers(max_magnitude=1e6), st.complex_numbers(max_magnitude=25))
@settings(max_examples=300, deadline=None)
def test_log_shift_property(z, w):
    assert log_shift_check(z, w)


def test_log_shift_random():
    ok, margin = log_shift_random(samples=20_000)
    assert ok and margin > 0


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("sigma,delta", [(0.7, 1.0), (0.55, 0.3), (0.9, 2.0)])
def test_tail_identity(m, sigma, delta):
    assert abs(tail_identity_closed(m, sigma, delta) - tail_identity_quad(m, sigma, delta)) < 1e-10


def test_asymptotic_symmetric():
    tb = prime_sum_asymptotics("symmetric", 0.2)
    assert tb.improving
    assert abs(tb.ratios[-1] - 1) < 0.05


def test_asymptotic_reflected_improves():
    tb = prime_sum_asymptotics("reflected", 0.7)
    assert tb.improving


def test_asymptotic_double_bounded():
    for case, key in (("double", "double/sigma=0.7,m=0"), ("double_simple", "double_simple/sigma=0.7")):
        tb = prime_sum_asymptotics(case, 0.7)
        assert check_pin(key, max(tb.ratios))


def test_asymptotic_range_condition():
    with pytest.raises(DomainError):
        prime_sum_asymptotics("log_weighted", 0.99, xs=(1e3,))


def test_asymptotic_half_integer_m():
    # m = -1/2 is allowed in the log-weighted sum
    tb = prime_sum_asymptotics("log_weighted", 0.7, m=-0.5)
    assert all(np.isfinite(tb.ratios))


@pytest.mark.parametrize("which", ["log", "odd0", "odd1", "minus1"])
def test_repr_chi4_pins(chi4, zeros4_150, which):
    r = representation_residual(which, 0.75, np.arange(5.0, 50.01, 0.5), chi4, zeros4_150)
    assert r.sup < REPR_BAND
    assert check_pin(f"repr/{which}", r.sup)


@pytest.mark.parametrize("which", ["log", "odd0", "minus1"])
def test_repr_other_characters(chi3, chi5s, which):
    from lcrit.zeros import find_zeros

    for chi in (chi3, *chi5s):
        zeros = find_zeros(chi, 100.0)
        r = representation_residual(which, 0.75, np.arange(5.0, 50.01, 5.0), chi, zeros)
        assert r.sup < REPR_BAND


def test_repr_uniformity(chi4, zeros4_150):
    r = representation_residual("log", 0.75, [6.0, 48.0], chi4, zeros4_150)
    assert abs(r.residual[0] - r.residual[1]) < REPR_BAND


def test_repr_bad_identity(chi4, zeros4_150):
    with pytest.raises(DomainError):
        representation_residual("even2", 0.75, [10.0], chi4, zeros4_150)


def test_pipeline(chi4):
    rep = pipeline_replay(0.75, 60.0, chi4)
    assert abs(rep.identity_closed - rep.identity_quad) < 1e-10
    assert rep.delta == pytest.approx(math.log(math.log(4 * (math.sqrt(1 + 3600) + 3))) / math.pi)
    assert rep.delta > 0.28
    assert not rep.violated


def test_pins_are_positive():
    assert all(v > 0 for v in REGRESSION_PINS.values())
