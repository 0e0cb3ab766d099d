"""Geometric side of the trace formula for one cusp, term by term."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import sympy

from core.specfun import EULER_GAMMA, TestFunctionPair, digamma_line, integrate_half_line, quad_complex
from groups.bianchi import BianchiGroup, verify_cusp_identity
from groups.repchar import CuspRepData
from spectral.zeta import ScatteringInput, cusp_terms, nce_sum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassBundle:
    """Class lists with the matching character traces (None means tr = dim V)."""
    lox: tuple = ()
    lox_traces: tuple | None = None
    nce: tuple = ()
    nce_traces: tuple | None = None
    ce: tuple = ()
    ce_traces: tuple | None = None


@dataclass(frozen=True)
class TraceTerm:
    name: str
    value: complex | None
    external: bool = False
    note: str = ""

    def as_record(self) -> dict:
        v = None if self.value is None else [complex(self.value).real, complex(self.value).imag]
        return dict(name=self.name, value=v, external=self.external, note=self.note)


@dataclass
class GeometricSide:
    terms: list = field(default_factory=list)
    log_A_coefficient: str = ""
    log_A_residual: str = ""

    def __getitem__(self, name: str) -> TraceTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise KeyError(name)

    @property
    def total(self) -> complex:
        return sum((complex(t.value) for t in self.terms if t.value is not None), 0j)

    @property
    def omitted(self) -> list[str]:
        return [t.name for t in self.terms if t.value is None]

    def as_record(self) -> dict:
        return dict(terms=[t.as_record() for t in self.terms], total=[self.total.real, self.total.imag],
                    omitted=self.omitted, log_A_coefficient=self.log_A_coefficient, log_A_residual=self.log_A_residual)


def _traces(traces, n: int, dim: int) -> list:
    return [dim] * n if traces is None else list(traces)


def identity_term(pair: TestFunctionPair, vol: float, dim: int) -> complex:
    """vol dimV / (4 pi^2) int_R h(1+t^2) t^2 dt."""
    f = lambda t: complex(pair.h(1 + t * t)) * t * t
    return vol * dim / (4 * math.pi ** 2) * 2 * quad_complex(f, 0.0, np.inf, rel=1e-11, what="identity term")


def parabolic_term(pair: TestFunctionPair, l_inf: int, index: int, eta: float) -> complex:
    """l/I (h(1)/4 + g(0)(eta/2 - gamma) - (1/2pi) int_R h(1+t^2) psi(1+it) dt)."""
    if not l_inf:
        return 0j
    f = lambda t: complex(pair.h(1 + t * t)) * 2 * digamma_line(t).real
    dig = quad_complex(f, 0.0, np.inf, rel=1e-11, what="parabolic digamma integral")
    return l_inf / index * (complex(pair.h(1)) / 4 + complex(pair.g(0)) * (eta / 2 - EULER_GAMMA) - dig / (2 * math.pi))


def lox_term(pair: TestFunctionPair, classes: Sequence, traces) -> complex:
    total = 0j
    for c, tr in zip(classes, traces):
        a = c.a
        total += complex(tr) * complex(pair.g(math.log(c.N))) * math.log(c.N0) / (c.m * abs(a - 1 / a) ** 2)
    return total


def cuspidal_elliptic_term(pair: TestFunctionPair, classes: Sequence, traces) -> complex:
    """sum tr/(|C| |1-eps^2|^2) (2 g(0) log|c| + int_0^inf g(x) sinh x / (cosh x - cos t) dx)."""
    g0 = complex(pair.g(0)); total = 0j
    for term in cusp_terms(classes, [complex(sympy.N(t)) if isinstance(t, sympy.Basic) else t for t in traces]):
        c = math.cos(term.t)

        def f(x, c=c):
            q = math.exp(-x)
            return complex(pair.g(x)) * (1 - q * q) / (1 + q * q - 2 * c * q)
        total += term.coef * (2 * g0 * term.log_c + integrate_half_line(f, rel=1e-11, what="cuspidal elliptic integral"))
    return total


def log_A_bookkeeping(G: BianchiGroup, rep: CuspRepData, classes: Sequence, traces) -> tuple[str, str]:
    """Coefficient of g(0) log A and the exact cusp identity residual.

    The coefficient is assembled from the floating-point cusp terms the cuspidal-elliptic block
    integrates (l/I + 2 sum coef) and rationalised; the residual comes from exact cyclotomic
    arithmetic. Both agree with k_inf exactly when the class list is complete.
    """
    traces = _traces(traces, len(classes), rep.dim)
    numeric = [complex(sympy.N(t)) if isinstance(t, sympy.Basic) else t for t in traces]
    value = rep.l_inf / G.stabilizer_index + 2 * sum(term.coef for term in cusp_terms(classes, numeric))
    coefficient = sympy.nsimplify(value, tolerance=1e-10, rational=True)
    residual = verify_cusp_identity(G, rep, classes, traces)
    return str(coefficient), str(residual)


def geometric_side(pair: TestFunctionPair, G: BianchiGroup, rep: CuspRepData, bundle: ClassBundle,
                   scat: ScatteringInput | None, eta: float, L_sum: float = 0.0,
                   phi_logderiv: float | None = None, lox_normalization: float = 1.0) -> GeometricSide:
    """Every geometric term for the supplied truncations.

    tr S(0) and the phi'/phi integral enter only when supplied (phi'/phi as a constant);
    otherwise the term is reported with value None.
    """
    dim = rep.dim; I = G.stabilizer_index; g0 = complex(pair.g(0)); h1 = complex(pair.h(1))
    ce_traces = _traces(bundle.ce_traces, len(bundle.ce), dim)
    terms = [
        TraceTerm("identity", identity_term(pair, G.covolume, dim)),
        TraceTerm("nce", lox_normalization * g0 * nce_sum(bundle.nce, _traces(bundle.nce_traces, len(bundle.nce), dim))),
        TraceTerm("loxodromic", lox_normalization * lox_term(pair, bundle.lox, _traces(bundle.lox_traces, len(bundle.lox), dim)),
                  note=f"{len(bundle.lox)} classes"),
        TraceTerm("scattering_at_0", None if scat is None else -scat.trS0 * h1 / 4, external=True,
                  note="" if scat is None else scat.notes or "supplied tr S(0)"),
    ]
    if phi_logderiv is None:
        terms.append(TraceTerm("phi_logderiv_integral", None, external=True, note="phi'/phi not available"))
    else:
        f = lambda t: complex(pair.h(1 + t * t))
        terms.append(TraceTerm("phi_logderiv_integral",
                               phi_logderiv / (4 * math.pi) * 2 * quad_complex(f, 0.0, np.inf, rel=1e-11, what="phi integral"),
                               external=True, note="constant phi'/phi"))
    terms += [
        TraceTerm("cuspidal_elliptic", cuspidal_elliptic_term(pair, bundle.ce, ce_traces)),
        TraceTerm("parabolic", parabolic_term(pair, rep.l_inf, I, eta)),
        TraceTerm("lattice_L", g0 / I * L_sum, note=f"{dim - rep.l_inf} nontrivial lattice characters"),
    ]
    out = GeometricSide(terms=terms)
    if bundle.ce:
        out.log_A_coefficient, out.log_A_residual = log_A_bookkeeping(G, rep, bundle.ce, bundle.ce_traces)
        if out.log_A_residual != "0" or out.log_A_coefficient != str(rep.k_inf):
            logger.warning("log A coefficient %s does not cancel against k_inf=%d", out.log_A_coefficient, rep.k_inf)
    for t in terms:
        if t.value is not None and not np.isfinite(complex(t.value)):
            logger.warning("geometric term %s is not finite", t.name)
    logger.debug("geometric side %s: total %s, omitted %s", pair.label, out.total, out.omitted)
    return out
