"""Character sums Z(x, L, psi) = sum' psi(mu)/|mu|^2 over a rank-2 lattice L = Z + Z tau.

The character convention is psi(n + m tau) = exp(2 pi i (n u + m v)); phases are
taken from the integer coordinates (n, m), so psi is exactly multiplicative.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from core.errors import ConvergenceFailure, DomainError, TrivialCharacter
from core.ladder import dyadic_ladder, rung_below
from signals.analysis_metrics import linear_fit, weighted_spread

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True)
class Lattice:
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if not self.tau.imag > 0:
            raise DomainError(f"lattice needs Im tau > 0, got {self.tau}")

    @property
    def covolume(self) -> float: return self.tau.imag

    @property
    def dual_basis(self) -> tuple[complex, complex]:
        """(mu1, mu2) with <mu1,1> = 1, <mu1,tau> = 0, <mu2,1> = 0, <mu2,tau> = 1."""
        x, y = self.tau.real, self.tau.imag
        return complex(1.0, -x / y), complex(0.0, 1.0 / y)

    def point(self, n, m): return n + m * self.tau

    def dual_point(self, a, b):
        mu1, mu2 = self.dual_basis
        return a * mu1 + b * mu2


def inner(p: complex, q: complex) -> float:
    return (p * q.conjugate()).real


@dataclass(frozen=True)
class LatticeCharacter:
    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "u", float(self.u) % 1.0)
        object.__setattr__(self, "v", float(self.v) % 1.0)

    @property
    def trivial(self) -> bool: return self.u == 0.0 and self.v == 0.0

    def conj(self) -> "LatticeCharacter": return LatticeCharacter(-self.u, -self.v)

    def __call__(self, n, m):
        frac = np.mod(np.asarray(n) * self.u + np.asarray(m) * self.v, 1.0)
        return np.exp(2j * np.pi * frac)


@dataclass
class LatticeSumResult:
    value: complex
    x_max: float
    tail_estimate: float
    eta: float | None = None

    def as_record(self, lat: Lattice, psi: LatticeCharacter) -> dict:
        return dict(tau_re=lat.tau.real, tau_im=lat.tau.imag, u=psi.u, v=psi.v, x_max=self.x_max,
                    value_re=self.value.real, value_im=self.value.imag, tail_estimate=self.tail_estimate,
                    eta=self.eta)


@dataclass
class EtaEstimate:
    eta: float
    uncertainty: float
    slope: float
    xs: np.ndarray = field(repr=False)
    partial_sums: np.ndarray = field(repr=False)


@njit(cache=True)
def _binned_sums(t_re, t_im, u, v, s, lo, bounds):
    # bin k collects lo < q <= bounds[k] (and q > bounds[k-1]); rows m ascending, n ascending
    K = bounds.shape[0]
    re = np.zeros(K); im = np.zeros(K)
    hi = bounds[K - 1]
    if hi <= 0.0:
        return re, im
    trivial = u == 0.0 and v == 0.0
    mmax = int(math.floor(math.sqrt(hi) / t_im)) + 1
    for m in range(-mmax, mmax + 1):
        y = m * t_im
        rem = hi - y * y
        if rem < 0.0:
            continue
        w = math.sqrt(rem); c = m * t_re
        for n in range(int(math.ceil(-c - w)) - 1, int(math.floor(-c + w)) + 2):
            if m == 0 and n == 0:
                continue
            x = n + c
            q = x * x + y * y
            if q > hi or q <= lo:
                continue
            k = np.searchsorted(bounds, q)
            wt = 1.0 / q if s == 1.0 else q ** (-s)
            if trivial:
                re[k] += wt
            else:
                ph = 2.0 * math.pi * ((n * u + m * v) % 1.0)
                re[k] += wt * math.cos(ph); im[k] += wt * math.sin(ph)
    return re, im


@njit(cache=True)
def _count(t_re, t_im, hi):
    total = 0
    mmax = int(math.floor(math.sqrt(hi) / t_im)) + 1
    for m in range(-mmax, mmax + 1):
        y = m * t_im; rem = hi - y * y
        if rem < 0.0:
            continue
        w = math.sqrt(rem); c = m * t_re
        for n in range(int(math.ceil(-c - w)) - 1, int(math.floor(-c + w)) + 2):
            x = n + c
            if (m != 0 or n != 0) and x * x + y * y <= hi:
                total += 1
    return total


def _inflate(x): return np.asarray(x, dtype=float) * (1.0 + MEMBERSHIP_TOL)


def count_points(lat: Lattice, x: float) -> int:
    return int(_count(lat.tau.real, lat.tau.imag, float(_inflate(x)))) if x > 0 else 0


def ladder_partial_sums(lat: Lattice, psi: LatticeCharacter, xs, s: float = 1.0) -> np.ndarray:
    """Z(x_k) for ascending xs in a single walk over the largest disc."""
    xs = np.asarray(xs, dtype=float)
    if np.any(np.diff(xs) <= 0):
        raise DomainError("ladder must be strictly ascending")
    bounds = _inflate(np.maximum(xs, 0.0))
    re, im = _binned_sums(lat.tau.real, lat.tau.imag, psi.u, psi.v, float(s), 0.0, bounds)
    return np.cumsum(re + 1j * im)


def shell_sums(lat: Lattice, psi: LatticeCharacter, w_grid, p: float, s: float = 1.0) -> np.ndarray:
    """sum over w < |mu|^2 <= p of psi(mu)/|mu|^{2s} for every w in w_grid."""
    w = np.asarray(w_grid, dtype=float)
    if np.any(w <= 0) or np.any(w >= p):
        raise DomainError("w_grid must lie in (0, p)")
    order = np.argsort(w); ws = w[order]
    bounds = _inflate(np.append(ws[1:], p))
    re, im = _binned_sums(lat.tau.real, lat.tau.imag, psi.u, psi.v, float(s), float(_inflate(ws[0])), bounds)
    bins = re + 1j * im
    tails = np.cumsum(bins[::-1])[::-1]
    out = np.empty_like(tails); out[order] = tails
    return out


def Z_partial(x: float, lat: Lattice, psi: LatticeCharacter, s: float = 1.0) -> complex:
    if not x > 0:
        return 0j
    return complex(ladder_partial_sums(lat, psi, [x], s)[0])


def eta_lambda(lat: Lattice, k0: int = 14, k1: int = 24, spread_tol: float = 1e-3) -> EtaEstimate:
    """eta_L from Z(x) = (pi/|L|)(ln x + eta_L) + O(x^-1/2) on the ladder x = 2^k.

    Each rung gives Z(x) |L| / pi - ln x = eta_L + O(x^-1/2); eta_L is the intercept of a weighted
    line through these values against x^-1/2, rungs weighted by x^(3/2).
    """
    _, xs = dyadic_ladder(k0, k1)
    Z = ladder_partial_sums(lat, LatticeCharacter(), xs).real
    weights = xs ** 1.5
    fit = linear_fit(np.log(xs), Z, weights=weights)
    rungs = Z * lat.covolume / math.pi - np.log(xs)
    eta = linear_fit(xs ** -0.5, rungs, weights=weights)["intercept"]
    _, spread = weighted_spread(rungs, weights)
    logger.debug("eta ladder tau=%s slope=%.8f eta=%.8f spread=%.2e", lat.tau, fit["slope"], eta, spread)
    if spread > spread_tol:
        raise ConvergenceFailure(f"eta ladder spread {spread:.3g} exceeds {spread_tol}")
    return EtaEstimate(eta=eta, uncertainty=spread, slope=fit["slope"], xs=xs, partial_sums=Z)


def L_direct(lat: Lattice, psi: LatticeCharacter, x_max: float = 1e6) -> LatticeSumResult:
    if psi.trivial:
        raise TrivialCharacter("L(L, psi) diverges for the trivial character")
    if x_max < 1e4:
        raise DomainError(f"x_max must be at least 1e4, got {x_max}")
    xs = np.append(rung_below(x_max)[::-1], x_max)
    Z = ladder_partial_sums(lat, psi, xs)
    c_meas = float(np.max(np.abs(Z[-1] - Z[:-1]) * np.sqrt(xs[:-1])))
    return LatticeSumResult(value=complex(Z[-1]), x_max=float(x_max), tail_estimate=c_meas / math.sqrt(x_max))


def tail_check(lat: Lattice, psi: LatticeCharacter, s: float, w_grid, p: float) -> float:
    if not 1.0 <= s <= 2.0:
        raise DomainError(f"tail_check needs s in [1, 2], got {s}")
    w = np.asarray(w_grid, dtype=float)
    tails = shell_sums(lat, psi, w, p, s)
    return float(np.max(np.abs(tails) * w ** (s - 0.5)))
