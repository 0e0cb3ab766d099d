"""Closed forms for lattice sums: Siegel functions and the two Kronecker limit formulas."""
from __future__ import annotations

import cmath
import math

from core.errors import DomainError, TrivialCharacter
from core.specfun import EULER_GAMMA
from lattice.sums import Lattice, LatticeCharacter


def bernoulli2(x: float) -> float: return x * x - x + 1.0 / 6.0


def _q_terms(tau: complex, digits: float = 18.0) -> int:
    return int(math.ceil(digits * math.log(10) / (2 * math.pi * tau.imag))) + 2


def siegel_g(a1: float, a2: float, tau: complex, q_terms: int = 8) -> complex:
    """-q^{B2(a1)/2} e^{2 pi i a2 (a1-1)/2} (1-q_z) prod_{n<=q_terms} (1-q^n q_z)(1-q^n/q_z)."""
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"siegel_g needs Im tau > 0, got {tau}")
    if q_terms < 0:
        raise DomainError("q_terms must be non-negative")
    q = cmath.exp(2j * math.pi * tau)
    qz = cmath.exp(2j * math.pi * (a1 * tau + a2))
    val = -cmath.exp(1j * math.pi * tau * bernoulli2(a1)) * cmath.exp(1j * math.pi * a2 * (a1 - 1)) * (1 - qz)
    qn = 1 + 0j
    for _ in range(q_terms):
        qn *= q
        val *= (1 - qn * qz) * (1 - qn / qz)
    return val


def siegel_log_abs(a1: float, a2: float, tau: complex) -> float:
    """log|g_{a1,a2}(tau)| with (a1, a2) reduced mod 1 first; the modulus is invariant under that shift.

    Summing logarithms keeps |q_z| <= 1 and avoids overflow of the product.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"siegel function needs Im tau > 0, got {tau}")
    a1 %= 1.0; a2 %= 1.0
    if a1 == 0.0 and a2 == 0.0:
        raise TrivialCharacter("g_{0,0} vanishes identically")
    y = tau.imag
    q = cmath.exp(2j * math.pi * tau)
    qz = cmath.exp(2j * math.pi * (a1 * tau + a2))
    out = -math.pi * y * bernoulli2(a1) + math.log(abs(1 - qz))
    qn = 1 + 0j
    for _ in range(_q_terms(tau)):
        qn *= q
        out += math.log(abs(1 - qn * qz)) + math.log(abs(1 - qn / qz))
    return out


def L_kronecker(lat: Lattice, psi: LatticeCharacter) -> float:
    """L(L, psi) = (-2 pi / Im tau) log|g_{-u, v}(tau)| for psi(n + m tau) = e^{2 pi i (n u + m v)}.

    The argument order (-u, v) is the one that agrees with direct summation.
    """
    if psi.trivial:
        raise TrivialCharacter("Kronecker's second limit formula needs a nontrivial character")
    return -2 * math.pi / lat.covolume * siegel_log_abs(-psi.u, psi.v, lat.tau)


def L_kronecker_swapped(lat: Lattice, psi: LatticeCharacter) -> float:
    # the other reading of the index order, reported beside L_kronecker by the cross-check run
    if psi.trivial:
        raise TrivialCharacter("Kronecker's second limit formula needs a nontrivial character")
    return -2 * math.pi / lat.covolume * siegel_log_abs(-psi.v, psi.u, lat.tau)


def dedekind_eta_log_abs(tau: complex) -> float:
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"eta needs Im tau > 0, got {tau}")
    q = cmath.exp(2j * math.pi * tau); qn = 1 + 0j
    out = -math.pi * tau.imag / 12
    for _ in range(_q_terms(tau)):
        qn *= q
        out += math.log(abs(1 - qn))
    return out


def eta_closed_form(lat: Lattice) -> float:
    """eta_L = 2(gamma - ln 2 - ln Im tau - 2 ln|eta(tau)|) from the first limit formula."""
    y = lat.covolume
    return 2 * (EULER_GAMMA - math.log(2) - math.log(y) - 2 * dedekind_eta_log_abs(lat.tau))
