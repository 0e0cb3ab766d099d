"""Selberg zeta function: partial product, log-derivative series, cusp integrals, divisor tables,
the functional-equation factor Psi and the Xi log-derivative.

Loxodromic classes carry T = T0^n E^v with eigenvalue a(T) = zeta0^v a0^n; representation data is
given per primitive class as joint eigenvalue pairs (t_j, t'_j) of chi(T0) and chi(E).
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import special

from core.errors import CaseUnsupported, DomainError, SeriesDivergence, UnsupportedRegime
from core.specfun import EULER_GAMMA, integrate_half_line
from groups.bianchi import BianchiGroup, CuspidalEllipticClass, LoxClass, NceClass
from groups.repchar import joint_diagonalize
from signals.acceleration import euler_transform, wynn_epsilon

logger = logging.getLogger(__name__)

ROOT_TOL = 1e-9
SERIES_TOL = 1e-9
CROSS_CHECK_TOL = 1e-8
SERIES_TERMS = (32, 48)
EULER_TERMS = (40, 60)
MAX_KL = 1000
SUPPORTED_CASES = (1, 2, 3)


# representation data

def _root_exponent(z: complex, n: int) -> int:
    """j with z = exp(2 pi i j / n); DomainError when z is not an n-th root of unity."""
    j = int(round(n * cmath.phase(z) / (2 * math.pi))) % n
    if abs(z - cmath.exp(2j * math.pi * j / n)) > ROOT_TOL:
        raise DomainError(f"{z} is not a {n}-th root of unity")
    return j


def joint_eigenvalues(A: np.ndarray, B: np.ndarray) -> list[tuple[complex, complex]]:
    """Eigenvalue pairs of two commuting unitary matrices on a common eigenbasis."""
    A = np.atleast_2d(np.asarray(A, dtype=complex)); B = np.atleast_2d(np.asarray(B, dtype=complex))
    if np.abs(A @ B - B @ A).max() > 1e-10:
        raise DomainError("chi(T0) and chi(E) do not commute")
    Z = joint_diagonalize(A, B, tol=ROOT_TOL)
    return [(complex(a), complex(b)) for a, b in zip(np.diag(Z.conj().T @ A @ Z), np.diag(Z.conj().T @ B @ Z))]


def character_eigs(G: BianchiGroup, chi, classes: Sequence[LoxClass]) -> list[list[tuple[complex, complex]]]:
    """(chi(T0), chi(E)) for each primitive class and a one-dimensional character on ring matrices."""
    ring = G.ring; out = []
    for c in classes:
        T0 = ring.from_moebius(c.rep)
        E = ring.from_moebius(c.torsion_gen) if c.torsion_gen is not None else ring.mat((1, 0), (0, 0), (0, 0), (1, 0))
        out.append([(complex(np.asarray(chi(T0)).ravel()[0]), complex(np.asarray(chi(E)).ravel()[0]))])
    return out


def class_trace(eigs: Sequence[tuple[complex, complex]], cls: LoxClass) -> complex:
    """tr chi(T0^n E^v) from the joint eigenvalues of the primitive class."""
    return sum(t ** cls.power * tp ** cls.torsion_power for t, tp in eigs)


def admissible(l, k, tp: complex, zeta0: complex, m: int):
    """c(T, j, l, k) = t'_j zeta0^(2l - 2k) == 1, tested on integer exponents."""
    p = _root_exponent(tp, m) if m > 1 else 0
    q = _root_exponent(zeta0, 2 * m)
    return (p + q * (np.asarray(l) - np.asarray(k))) % m == 0


# partial product and its log-derivative

def _check_s(s) -> complex:
    s = complex(s)
    if not s.real > 1:
        raise DomainError(f"zeta needs Re s > 1, got {s}")
    return s


def _default_eigs(classes):
    return [[(1 + 0j, 1 + 0j)]] * len(classes)


def log_zeta_partial(s: complex, classes: Sequence[LoxClass], rep_eigs=None, kl_tol: float = 1e-16) -> complex:
    """sum of log(1 - t_j a0^-2k conj(a0)^-2l N0^(-s-1)) over admissible (l, k) with N0^-(k+l) >= kl_tol."""
    s = _check_s(s)
    rep_eigs = _default_eigs(classes) if rep_eigs is None else rep_eigs
    if len(rep_eigs) != len(classes):
        raise DomainError(f"{len(rep_eigs)} eigenvalue lists for {len(classes)} classes")
    total = 0j
    for c, eigs in zip(classes, rep_eigs):
        if not c.N0 > 1:
            raise DomainError(f"class norm N0 = {c.N0} must exceed 1")
        K = int(math.ceil(-math.log(kl_tol) / math.log(c.N0)))
        if K > MAX_KL:
            raise UnsupportedRegime(f"N0 = {c.N0:.6g} needs {K} (l, k) levels for kl_tol={kl_tol:g}; cap is {MAX_KL}")
        l, k = np.meshgrid(np.arange(K + 1), np.arange(K + 1), indexing="ij")
        keep = l + k <= K
        X = c.a0 ** (-2.0 * k) * np.conj(c.a0) ** (-2.0 * l) * c.N0 ** (-s - 1)
        for t, tp in eigs:
            sel = keep & admissible(l, k, tp, c.zeta0, c.m)
            total += np.log1p(-t * X[sel]).sum()
    return complex(total)


def zeta_partial(s: complex, classes: Sequence[LoxClass], rep_eigs=None, kl_tol: float = 1e-16) -> complex:
    return cmath.exp(log_zeta_partial(s, classes, rep_eigs, kl_tol))


def zeta_logderiv_series(s: complex, classes: Sequence[LoxClass], traces=None) -> complex:
    """sum over classes of tr chi(T) log N(T0) / (m |a - 1/a|^2) N(T)^-s."""
    s = _check_s(s)
    traces = [1.0] * len(classes) if traces is None else traces
    total = 0j
    for c, tr in zip(classes, traces):
        a = c.a
        total += tr * math.log(c.N0) / (c.m * abs(a - 1 / a) ** 2) * c.N ** (-s)
    return total


# cusp integrals int_0^inf e^{-sx} sinh x / (cosh x - cos t) dx

def _check_cusp(s, t) -> tuple[complex, float]:
    s = complex(s); t = float(t)
    if not s.real > 0:
        raise DomainError(f"cusp integral needs Re s > 0, got {s}")
    if not 0 < t <= math.pi + 1e-15:
        raise DomainError(f"cusp integral needs t in (0, pi], got {t}")
    return s, min(t, math.pi)


def _is_pi(t: float) -> bool: return abs(t - math.pi) < 1e-12


def cusp_integral_quadrature(s: complex, t: float) -> complex:
    s, t = _check_cusp(s, t); c = math.cos(t)

    def f(x):
        q = math.exp(-x)
        return cmath.exp(-s * x) * (1 - q * q) / (1 + q * q - 2 * c * q)
    return integrate_half_line(f, rel=1e-12, what=f"cusp integral (s={s}, t={t:.6g})")


def _mode_limit(s: complex, z: complex, n: int) -> tuple[complex, float]:
    k = np.arange(1, n + 1)
    terms = z ** k * (1 / (s - 1 + k) - 1 / (s + 1 + k))
    return wynn_epsilon(np.cumsum(terms))


def _alternating_limit(s: complex, n: int) -> complex:
    k = np.arange(1, n + 1)
    a = (s + 1) / (k + s + 1) - (s - 1) / (k + s - 1)
    return complex(euler_transform(a)[-1])


def cusp_integral_series(s: complex, t: float) -> complex:
    """(1/sin t) sum_k sin(kt) (1/(s-1+k) - 1/(s+1+k)), accelerated.

    sin(kt) is split into the two exponentials and each single-mode series goes through the
    epsilon algorithm; t = pi is the alternating series sum_k (-1)^(k+1) k (...) summed by Euler.
    """
    s, t = _check_cusp(s, t)
    if _is_pi(t):
        vals = [_alternating_limit(s, n) for n in EULER_TERMS]; err = 0.0
    else:
        z = cmath.exp(1j * t); vals = []; err = 0.0
        for n in SERIES_TERMS:
            (sp, ep), (sm, em) = _mode_limit(s, z, n), _mode_limit(s, 1 / z, n)
            vals.append((sp - sm) / (2j * math.sin(t))); err = max(err, (ep + em) / math.sin(t))
    value = complex(vals[-1]); drift = max(abs(vals[-1] - vals[0]), err)
    if not math.isfinite(abs(value)) or drift > SERIES_TOL * max(1.0, abs(value)):
        raise SeriesDivergence(f"cusp series at s={s}, t={t:.6g} did not settle (drift {drift:.3g})")
    return value


def _beta(x: complex) -> complex:
    return 0.5 * (special.psi((x + 1) / 2) - special.psi(x / 2))


def cusp_integral_closed_form(s: complex, t: float, max_den: int = 720) -> complex:
    """Digamma evaluation for t = 2 pi j / p; at t = pi it is (s+1) beta(s+2) - (s-1) beta(s)."""
    s, t = _check_cusp(s, t)
    frac = Fraction(t / math.pi).limit_denominator(max_den)
    if abs(t - math.pi * frac) > 1e-12:
        raise DomainError(f"t/pi = {t / math.pi} is not a rational with denominator <= {max_den}")
    if frac == 1:
        return complex((s + 1) * _beta(s + 2) - (s - 1) * _beta(s))
    half = frac / 2; p = half.denominator
    r = np.arange(1, p + 1)
    block = np.sin(r * t) / p * (special.psi((s + 1 + r) / p) - special.psi((s - 1 + r) / p))
    return complex(block.sum() / math.sin(t))


def cusp_integral(s: complex, t: float, cross_check: bool = True) -> complex:
    value = cusp_integral_series(s, t)
    if cross_check:
        q = cusp_integral_quadrature(s, t)
        if abs(q - value) > CROSS_CHECK_TOL * max(1.0, abs(value)):
            logger.warning("cusp integral s=%s t=%.6g: series %s vs quadrature %s", s, t, value, q)
    return value


# cuspidal-elliptic and non-cuspidal elliptic data

@dataclass(frozen=True)
class CuspTerm:
    """tr chi(g)/(|C(g)| |1-eps^2|^2) with the angle t of cos t = 1 - |1-eps^2|^2/2 and log|c|."""
    coef: float
    t: float
    log_c: float
    one_minus_eps2_sq: int


def cusp_terms(classes: Sequence[CuspidalEllipticClass], traces=None) -> list[CuspTerm]:
    traces = [1.0] * len(classes) if traces is None else traces
    out = []
    for c, tr in zip(classes, traces):
        q = c.one_minus_eps2_sq
        out.append(CuspTerm(coef=complex(tr).real / (c.centralizer_order * q), t=math.acos(1 - q / 2),
                            log_c=math.log(c.c_abs), one_minus_eps2_sq=q))
    return out


def nce_sum(classes: Sequence[NceClass], traces=None) -> float:
    """sum tr chi(R) log N(T0) / (4 |E(R)| sin^2(pi k / m)) over classes with a known axis norm."""
    traces = [1.0] * len(classes) if traces is None else traces
    total = 0.0
    for c, tr in zip(classes, traces):
        if c.N0 is None:
            logger.warning("nce class %s has no loxodromic axis element; skipped", c.ring_rep)
            continue
        total += complex(tr).real * math.log(c.N0) / (4 * c.torsion_order * c.sin2)
    return total


# divisor tables

def _check_case(index: int) -> None:
    if index not in SUPPORTED_CASES:
        raise CaseUnsupported(f"stabilizer index {index} is not handled (supported: {SUPPORTED_CASES})")


def _cos_nt(index: int, n: int) -> Fraction:
    # cos t_I = 1 - |1 - eps^2|^2 / 2: t = pi for index 2, t = 2 pi/3 for index 3
    if index == 2:
        return Fraction((-1) ** (n % 2))
    return Fraction(1) if n % 3 == 0 else Fraction(-1, 2)


def residue_formula(index: int, k: int, l: int, n: int, parabolic_sign: int = 1) -> Fraction:
    """Residue at s = n < 0 of 2s times the topological terms: sign l/I - (k - l/I) cos(n t_I)."""
    _check_case(index)
    if index == 1:
        return Fraction(k)
    lI = Fraction(l, index)
    return parabolic_sign * lI - (k - lI) * _cos_nt(index, n)


@dataclass(frozen=True)
class ScatteringInput:
    trS0: float
    notes: str = ""


@dataclass(frozen=True)
class DivisorTable:
    case_index: int
    k_inf: int
    l_inf: int
    entries: tuple = field(default=())

    def residue(self, location) -> Fraction:
        for loc, r in self.entries:
            if loc == location:
                return r
        raise KeyError(location)

    def root_order(self) -> int:
        """Least N with N times every residue integral."""
        return math.lcm(*(r.denominator for _, r in self.entries)) if self.entries else 1

    def as_record(self) -> dict:
        return dict(case_index=self.case_index, k_inf=self.k_inf, l_inf=self.l_inf, root_order=self.root_order(),
                    case_root_order=case_root_order(self.case_index),
                    entries=[dict(location=loc, residue=dict(num=r.numerator, den=r.denominator)) for loc, r in self.entries])


def case_root_order(index: int) -> int:
    """Least N clearing every residue denominator of the case, over all 0 <= k <= l and n < 0.

    Residues depend on n through n mod index and on (k, l) linearly, so one period of n and
    k, l up to index suffice.
    """
    _check_case(index)
    dens = [residue_formula(index, k, l, n).denominator
            for l in range(index + 1) for k in range(l + 1) for n in range(-1, -index - 1, -1)]
    return math.lcm(*dens)


def _s0_residue(k: int, scat: ScatteringInput) -> Fraction:
    tr = round(scat.trS0)
    if abs(scat.trS0 - tr) > 1e-9 or (tr - k) % 2 or abs(tr) > k:
        raise DomainError(f"tr S(0) = {scat.trS0} is not a sum of {k} terms +-1")
    return Fraction(tr - k, 2)


def residue_table(case_index: int, k_inf: int, l_inf: int, scat: ScatteringInput, n_min: int = -6) -> DivisorTable:
    _check_case(case_index)
    if l_inf < k_inf or k_inf < 0:
        raise DomainError(f"need 0 <= k_inf <= l_inf, got k={k_inf}, l={l_inf}")
    if case_index == 1 and l_inf != k_inf:
        raise DomainError("stabilizer index 1 forces l_inf = k_inf")
    if n_min > -1:
        raise DomainError(f"n_min must be <= -1, got {n_min}")
    entries = [(n, residue_formula(case_index, k_inf, l_inf, n)) for n in range(-1, n_min - 1, -1)]
    entries.append(("s=0", _s0_residue(k_inf, scat)))
    return DivisorTable(case_index=case_index, k_inf=k_inf, l_inf=l_inf, entries=tuple(entries))


# functional equation

@dataclass(frozen=True)
class FunctionalEqParams:
    E: float
    vol: float
    dimV: int
    k_inf: int
    l_inf: int
    index: int

    def __post_init__(self):
        if not self.vol > 0:
            raise DomainError(f"covolume must be positive, got {self.vol}")


def functional_constant_E(index: int, l_inf: int, eta: float, L_sum: float,
                          ce_terms: Sequence[CuspTerm] = (), nce: float = 0.0) -> float:
    """E = nce + 2 sum tr log|c| / (|C| |1-eps^2|^2) + (l (eta/2 - gamma) + sum L) / I."""
    ce = 2 * sum(c.coef * c.log_c for c in ce_terms)
    return nce + ce + (l_inf * (eta / 2 - EULER_GAMMA) + L_sum) / index


def psi_factor(s: complex, params: FunctionalEqParams, sign: int = 1) -> complex:
    """Psi(s) = (Gamma(1-s)/Gamma(1+s))^k exp(-vol dimV s^3/(3 pi) + E s) times exp(C) = sign."""
    if sign not in (1, -1):
        raise DomainError(f"exp(C) is +-1, got {sign}")
    if params.index == 2 and params.k_inf != params.l_inf:
        raise UnsupportedRegime("index 2 with k_inf != l_inf needs the extra infinite product, which is not implemented")
    if params.index not in (1, 2):
        raise CaseUnsupported(f"no functional equation for stabilizer index {params.index}")
    s = complex(s); k = params.k_inf
    if k and s.real == round(s.real) and s.imag == 0 and s.real >= 1:
        raise DomainError(f"Gamma(1-s) has a pole at s={s}")
    log_ratio = k * (special.loggamma(1 - s) - special.loggamma(1 + s)) if k else 0
    return sign * cmath.exp(log_ratio - params.vol * params.dimV * s ** 3 / (3 * math.pi) + params.E * s)


# Xi log-derivative

def spectral_side(s: complex, B: complex, poles: Sequence[complex] = (), phi_logderiv: float = 0.0) -> complex:
    """sum (1/(s^2-s_n^2) - 1/(B^2-s_n^2)) - (1/4pi) int (1/(s^2+w^2) - 1/(B^2+w^2)) phi'/phi(iw) dw, phi'/phi constant."""
    s = complex(s); B = complex(B)
    total = sum(1 / (s * s - p * p) - 1 / (B * B - p * p) for p in poles)
    return total - phi_logderiv / 4 * (1 / s - 1 / B)


@dataclass(frozen=True)
class XiInputs:
    index: int
    l_inf: int
    trS0: float
    vol: float
    dimV: int
    E: float
    lox_classes: tuple = ()
    lox_traces: tuple | None = None
    ce_terms: tuple = ()
    lox_series: Callable[[complex], complex] | None = field(default=None, repr=False)
    lox_normalization: float = 1.0

    def lox(self, s: complex) -> complex:
        if self.lox_series is not None:
            return complex(self.lox_series(s))
        return self.lox_normalization * zeta_logderiv_series(s, self.lox_classes, self.lox_traces)


def nonspectral_terms(s: complex, inp: XiInputs) -> complex:
    """Non-spectral right-hand terms F(s) of the resolvent log-derivative identity, so that
    (1/2s) lox(s) - (1/2B) lox(B) = spectral(s, B) + F(s) - F(B)."""
    s = complex(s); I = inp.index; l = inp.l_inf
    F = l / I * special.psi(1 + s) / (2 * s)
    F += inp.trS0 / (4 * s * s) - l / (4 * I * s * s)
    F -= sum(c.coef * cusp_integral(s, c.t, cross_check=False) for c in inp.ce_terms) / (2 * s)
    F -= inp.E / (2 * s)
    F += inp.vol * inp.dimV * s / (4 * math.pi)
    return complex(F)


def xi_logderiv(s: complex, inp: XiInputs, convention: str = "consistent") -> complex:
    """Xi'/Xi(s).

    "consistent": lox(s) - 2s F(s), for which (1/2s) Xi'/Xi(s) - (1/2B) Xi'/Xi(B) is exactly the
    spectral side. "displayed": lox + (l/I) psi(1+s) + (trS0 - l/I)/(2s) - cusp block - E, the
    combination as usually written.
    """
    s = _check_s(s)
    if convention == "consistent":
        return inp.lox(s) - 2 * s * nonspectral_terms(s, inp)
    if convention != "displayed":
        raise DomainError(f"unknown Xi convention {convention!r}")
    lI = inp.l_inf / inp.index
    ce = sum(c.coef * cusp_integral(s, c.t, cross_check=False) for c in inp.ce_terms) / (2 * s)
    return complex(inp.lox(s) + lI * special.psi(1 + s) + (inp.trS0 - lI) / (2 * s) - ce - inp.E)
