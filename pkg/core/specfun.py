"""Special functions and Selberg transform pairs.

Bessel K and I, the digamma function on the line 1+it, the Selberg--Harish-Chandra
transform k -> h, the Fourier partner g of h, and the resolvent pair
h(w) = 1/(s^2+w-1) - 1/(B^2+w-1) used by the zeta log-derivative.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special
from scipy.integrate import quad

from core.errors import DomainError, QuadratureFailure

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
# B_2k / 2k for k = 1..7
_DIGAMMA_ASYMPTOTIC = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)


@dataclass(frozen=True)
class TestFunctionPair:
    """h on {1+t^2}, its Fourier partner g, and the epsilon of |h(1+t^2)| <= C(1+t^2)^(-3/2-eps)."""
    __test__ = False
    h: Callable[[complex], complex]
    g: Callable[[float], complex]
    decay_exponent: float
    label: str = ""


@dataclass(frozen=True)
class Admissibility:
    constant: float
    bounded: bool


def _quad(f, a, b, rel, what, floor=1e-14, **kw):
    val, err = quad(f, a, b, epsabs=kw.pop("epsabs", 0.0), epsrel=rel, limit=kw.pop("limit", 400), **kw)
    if not math.isfinite(val) or err > max(1e3 * rel * abs(val), floor):
        raise QuadratureFailure(f"{what}: value {val!r} with error estimate {err:.3g}")
    return val


def quad_complex(f, a, b, rel=1e-11, what="integral", **kw) -> complex:
    re = _quad(lambda x: complex(f(x)).real, a, b, rel, what, **dict(kw))
    im = _quad(lambda x: complex(f(x)).imag, a, b, rel, what, **dict(kw))
    return complex(re, im)


def integrate_half_line(f, rel=1e-11, step=10.0, u_max=700.0, what="integral") -> complex:
    """Integral of f over [0, inf) by adaptive panels [0, step], [step, 2 step], ...

    Stops after two consecutive panels contribute below rel of the running total.
    """
    total = 0j; quiet = 0; a = 0.0
    while a < u_max:
        b = min(a + step, u_max)
        part = quad_complex(f, a, b, rel=rel, what=what, epsabs=1e-300)
        total += part; a = b
        quiet = quiet + 1 if abs(part) <= rel * max(abs(total), 1e-300) else 0
        if quiet >= 2:
            return total
    logger.warning("%s: integrand still contributing at u=%g", what, u_max)
    return total


def bessel_K(nu: float, x: float) -> float:
    """K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt."""
    if not x > 0:
        raise DomainError(f"bessel_K needs x > 0, got {x}")
    nu = abs(float(nu)); t_max = 1.0
    while x * math.cosh(t_max) - nu * t_max < 760.0:
        t_max *= 1.25
    f = lambda t: math.exp(nu * t - x * math.cosh(t)) * 0.5 * (1.0 + math.exp(-2.0 * nu * t))
    return _quad(f, 0.0, t_max, 1e-13, "bessel_K", epsabs=1e-300)


def bessel_I(nu: float, x: float) -> float:
    """I_nu(x) = sum_m (x/2)^(nu+2m) / (m! Gamma(nu+m+1)), summed in log space."""
    if not x > 0:
        raise DomainError(f"bessel_I needs x > 0, got {x}")
    m = np.arange(int(x / 2 + 10 * math.sqrt(x) + 60))
    logt = (nu + 2 * m) * math.log(x / 2) - special.gammaln(m + 1) - special.gammaln(nu + m + 1)
    return float(np.exp(special.logsumexp(logt)))


def digamma(z: complex) -> complex:
    """psi(z) for Re z > 0: shift by 10 then the Stirling series through B_14."""
    z = complex(z); acc = 0j
    for k in range(10):
        acc -= 1 / (z + k)
    w = z + 10; w2 = 1 / (w * w); p = w2; tail = 0j
    for c in _DIGAMMA_ASYMPTOTIC:
        tail += c * p; p *= w2
    return acc + cmath.log(w) - 1 / (2 * w) - tail


def digamma_line(t: float) -> complex:
    return digamma(1 + 1j * t)


def digamma_integral(s: complex) -> complex:
    """(1/2pi) int_R 2s/(s^2+w^2) psi(1+iw) dw for Re s > 0.

    The integrand's w <-> -w symmetry turns it into (1/pi) int_0^inf 2s/(s^2+w^2) Re psi(1+iw) dw.
    Closing the contour in the lower half-plane gives psi(1+s); see digamma_integral_closed.
    """
    s = complex(s)
    if not s.real > 0:
        raise DomainError("digamma_integral needs Re s > 0")
    f = lambda w: 2 * s / (s * s + w * w) * digamma_line(w).real / math.pi
    return quad_complex(f, 0.0, np.inf, rel=1e-11, what="digamma_integral")


def digamma_integral_closed(s: complex) -> complex:
    return complex(special.psi(1 + complex(s)))


def shc_forward(k: Callable[[float], complex], s: complex) -> complex:
    """Selberg--Harish-Chandra transform h(1-s^2) of a radial kernel k.

    After t = e^u the defining integral becomes (4 pi / s) int_0^inf k(cosh u) sinh(su) sinh(u) du.
    """
    s = complex(s)
    if s.real == 0:
        raise DomainError("shc_forward needs Re s != 0")
    f = lambda u: complex(k(math.cosh(u))) * cmath.sinh(s * u) * math.sinh(u) if u > 0 else 0j
    return 4 * math.pi / s * integrate_half_line(f, rel=1e-11, what="shc_forward")


def g_from_h(h: Callable[[complex], complex], x: float) -> complex:
    """g(x) = (1/2pi) int_R h(1+t^2) e^{-itx} dt = (1/pi) int_0^inf h(1+t^2) cos(tx) dt."""
    x = abs(float(x))
    if x == 0:
        f = lambda t: complex(h(1 + t * t)) / math.pi
        return quad_complex(f, 0.0, np.inf, rel=1e-11, what="g_from_h")
    out = []
    for part in (lambda t: complex(h(1 + t * t)).real, lambda t: complex(h(1 + t * t)).imag):
        val, err = quad(part, 0.0, np.inf, weight="cos", wvar=x, epsabs=1e-13, limlst=100)
        if not math.isfinite(val) or err > 1e-9:
            raise QuadratureFailure(f"g_from_h at x={x}: error estimate {err:.3g}")
        out.append(val / math.pi)
    return complex(*out)


def resolvent_pair(s: complex, B: complex) -> TestFunctionPair:
    s = complex(s); B = complex(B)
    if not 1 < s.real < B.real:
        raise DomainError(f"resolvent pair needs 1 < Re s < Re B, got s={s}, B={B}")
    h = lambda w: 1 / (s * s + w - 1) - 1 / (B * B + w - 1)
    g = lambda x: cmath.exp(-s * abs(x)) / (2 * s) - cmath.exp(-B * abs(x)) / (2 * B)
    return TestFunctionPair(h=h, g=g, decay_exponent=0.5, label=f"resolvent(s={s}, B={B})")


def check_admissible(pair: TestFunctionPair, t_max: float = 1e3, n: int = 400) -> Admissibility:
    t = np.geomspace(1.0, t_max, n)
    ratio = np.array([abs(complex(pair.h(1 + v * v))) for v in t]) * (1 + t * t) ** (1.5 + pair.decay_exponent)
    C = float(ratio.max())
    return Admissibility(constant=C, bounded=bool(np.isfinite(C) and ratio[n // 2:].max() <= 1.5 * ratio[: n // 2].max()))
