import math

import pytest
from scipy import special

from core.errors import DomainError
from core.geometry import phi_s
from core.specfun import (EULER_GAMMA, bessel_I, bessel_K, check_admissible, digamma, digamma_integral,
                          digamma_integral_closed, digamma_line, g_from_h, resolvent_pair, shc_forward)


def test_bessel_K_half_order():
    assert bessel_K(0.5, 1.0) == pytest.approx(0.4610685044, rel=1e-9)
    assert bessel_K(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1.0), rel=1e-11)


@pytest.mark.parametrize("nu, x", [(0.0, 0.3), (1.3, 2.0), (2.5, 7.5)])
def test_bessel_against_scipy(nu, x):
    assert bessel_K(nu, x) == pytest.approx(special.kv(nu, x), rel=1e-10)
    assert bessel_I(nu, x) == pytest.approx(special.iv(nu, x), rel=1e-10)


def test_bessel_domain():
    assert bessel_I(0.0, 1e-8) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        bessel_K(1.0, 0.0)


def test_digamma_line():
    assert digamma_line(0.0) == pytest.approx(-EULER_GAMMA, abs=1e-12)
    v = digamma_line(1.0)
    assert v.real == pytest.approx(0.0946503206, abs=1e-9)
    assert v.imag == pytest.approx(1.0766740474, abs=1e-9)
    assert digamma(2.5 + 0.3j) == pytest.approx(complex(special.psi(2.5 + 0.3j)), abs=1e-12)


def test_digamma_integral_matches_closed_form():
    assert digamma_integral(2.0) == pytest.approx(digamma_integral_closed(2.0), abs=1e-7)


def test_shc_forward_resolvent_kernel():
    k = lambda t: phi_s(t, 2.0) / (4 * math.pi)
    assert shc_forward(k, 1.2) == pytest.approx(0.390625, rel=1e-6)
    assert shc_forward(lambda t: 0.0, 1.2) == 0


def test_g_from_h():
    h = lambda w: 1 / (4 + w - 1)
    assert g_from_h(h, 0.0) == pytest.approx(0.25, abs=1e-9)
    assert g_from_h(h, 1.0) == pytest.approx(math.exp(-2) / 4, abs=1e-9)


def test_resolvent_pair():
    pair = resolvent_pair(1.5, 3.0)
    for x in (0.0, 0.7, 2.0):
        assert g_from_h(pair.h, x) == pytest.approx(pair.g(x), abs=1e-8)
    assert check_admissible(pair).bounded
    with pytest.raises(DomainError):
        resolvent_pair(0.5, 3.0)
    with pytest.raises(DomainError):
        resolvent_pair(2.0, 1.5)


def test_bessel_K_solves_modified_bessel_equation():
    nu, x, h = 0.3, 2.0, 2e-3
    y = bessel_K(nu, x)
    d1 = (bessel_K(nu, x + h) - bessel_K(nu, x - h)) / (2 * h)
    d2 = (bessel_K(nu, x + h) - 2 * y + bessel_K(nu, x - h)) / h ** 2
    assert abs(x * x * d2 + x * d1 - (x * x + nu * nu) * y) <= 1e-6


@pytest.mark.parametrize("nu, x", [(0.0, 2.0), (1.5, 0.7)])
def test_bessel_wronskian(nu, x):
    w = bessel_I(nu, x) * bessel_K(nu + 1, x) + bessel_I(nu + 1, x) * bessel_K(nu, x)
    assert w == pytest.approx(1 / x, rel=1e-10)


@pytest.mark.parametrize("s0", [2.0, 2.5])
@pytest.mark.parametrize("s", [0.5, 1.2, 1.7 + 0.3j])
def test_shc_forward_resolvent_grid(s, s0):
    k = lambda t: phi_s(t, s0) / (4 * math.pi)
    assert shc_forward(k, s) == pytest.approx(1 / (s0 * s0 - s * s), rel=1e-6)
