"""Eisenstein series E(P, s, v) = sum over Gamma_inf \\ Gamma of r(MP)^(1+s) chi(M)* v, for Re s > 1.

Cosets are bottom rows (c, d) of coprime ring elements modulo units. The truncation keeps
|c| <= H and |d| <= H(1 + |c|), and is applied to the point reduced into the centred
fundamental cell of the cusp lattice, so truncated sums stay exactly lattice-periodic.
Every coset term is an exact (1 - s^2)-eigenfunction of the Laplacian.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from core.errors import DomainError, NotSingularVector, PeriodicityViolation
from core.geometry import PointH3
from groups.bianchi import BianchiGroup
from groups.repchar import UnitaryRepSpec, decompose_restriction
from lattice.sums import Lattice

logger = logging.getLogger(__name__)

CHUNK = 4096


def worker_count() -> int:
    return max(1, int(os.environ.get("KLEINIAN_THREADS", "1")))


@dataclass
class EisensteinEval:
    value: np.ndarray
    s: complex
    coset_bound: int
    tail_indicator: float
    n_cosets: int = 0

    def as_record(self) -> dict:
        return dict(value=[[complex(z).real, complex(z).imag] for z in self.value], s=[self.s.real, self.s.imag],
                    coset_bound=self.coset_bound, tail_indicator=self.tail_indicator, n_cosets=self.n_cosets)


def coset_key(G: BianchiGroup, M) -> tuple:
    """Canonical (c, d) of the coset Gamma_inf M: the bottom row times the unit minimising it lexicographically."""
    ring = G.ring; M = np.asarray(M, dtype=np.int64)
    if M.shape != (4, 2):
        raise DomainError(f"coset_key takes one ring matrix, got shape {M.shape}")
    rows = np.concatenate([ring.mul(ring.units, M[2]), ring.mul(ring.units, M[3])], axis=1)
    return tuple(int(v) for v in rows[np.lexsort(rows.T[::-1])[0]])


def _coord_bound(radius: float) -> int:
    # |x + y omega| <= R forces max(|x|, |y|) <= 2R/sqrt(3) in both rings
    return int(math.ceil(2 * radius / math.sqrt(3))) + 1


@lru_cache(maxsize=16)
def coset_rows(G: BianchiGroup, H: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(c, d, shell) for the truncated coset set, ordered by shell then coordinates.

    shell = max(|c|, |d|/(1 + |c|)); the identity coset (0, 1) has shell 0.
    """
    if H < 0:
        raise DomainError(f"coset bound must be >= 0, got {H}")
    ring = G.ring
    cs, ds = [np.array([[0, 0]])], [np.array([[1, 0]])]
    if H >= 1:
        box = ring.box(_coord_bound(H))
        box = box[~ring.is_zero(box) & (np.abs(ring.to_complex(box)) <= H + 1e-12)]
        for c in np.unique(ring.canonical_mod_units(box), axis=0):
            Rc = H * (1 + abs(ring.to_complex(c)))
            dbox = ring.box(_coord_bound(Rc))
            dbox = dbox[np.abs(ring.to_complex(dbox)) <= Rc + 1e-12]
            dbox = dbox[ring.norm(ring.gcd(np.broadcast_to(c, dbox.shape), dbox)) == 1]
            cs.append(np.broadcast_to(c, dbox.shape)); ds.append(dbox)
    c = np.concatenate(cs); d = np.concatenate(ds)
    ac = np.abs(ring.to_complex(c)); shell = np.maximum(ac, np.abs(ring.to_complex(d)) / (1 + ac))
    shell[0] = 0.0
    order = np.lexsort((d[:, 1], d[:, 0], c[:, 1], c[:, 0], np.round(shell, 12)))
    c, d, shell = c[order], d[order], shell[order]
    for a in (c, d, shell):
        a.flags.writeable = False
    logger.debug("d=%d H=%d: %d cosets", G.d, H, len(c))
    return c, d, shell


def coset_matrices(G: BianchiGroup, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Completes each bottom row (c, d) to a determinant-one ring matrix."""
    ring = G.ring
    g, x, y = ring.xgcd(d, c)
    ginv = ring.unit_inverse(g)
    return ring.mat(ring.mul(x, ginv), -ring.mul(y, ginv), c, d)


def _reduce_to_cell(z: np.ndarray, lat: Lattice) -> np.ndarray:
    y = z.imag / lat.tau.imag; x = z.real - y * lat.tau.real
    return z - np.round(x) - np.round(y) * lat.tau


def _singular_check(G, spec, v) -> np.ndarray:
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    if v.shape != (spec.dim,):
        raise DomainError(f"vector of length {v.shape} for a rep of dimension {spec.dim}")
    data = decompose_restriction(spec, G)
    B = data.singular_basis
    res = np.linalg.norm(v - B @ (B.conj().T @ v))
    if res > 1e-10 * max(1.0, np.linalg.norm(v)):
        raise NotSingularVector(f"v is not fixed by chi(Gamma_inf) (residual {res:.3g})")
    return v


class EisensteinSampler:
    """Truncated E(., s, v) with the coset set and chi(M)* v precomputed.

    chi is None (trivial chi), a vectorised callable on ring matrices returning scalars
    (one-dimensional characters) or (n, dim, dim) matrices, or per-coset values keyed by
    coset_key.
    """

    def __init__(self, G: BianchiGroup, spec: UnitaryRepSpec, v, s: complex, H: int,
                 chi: Callable | dict | None = None):
        s = complex(s)
        if not s.real > 1:
            raise DomainError(f"Eisenstein series needs Re s > 1, got {s}")
        self.G = G; self.s = s; self.H = H
        self.v = _singular_check(G, spec, v)
        c, d, self.shell = coset_rows(G, H)
        ring = G.ring
        self.cc = ring.to_complex(c); self.dc = ring.to_complex(d)
        self.vecs = self._chi_star_v(G, spec, chi, c, d)
        self.last_shell = self.shell > H - 1 if H >= 1 else np.zeros(len(c), bool)

    def _chi_star_v(self, G, spec, chi, c, d) -> np.ndarray:
        n = len(c)
        if chi is None:
            if spec.label != "trivial" and any(np.abs(spec[g] - np.eye(spec.dim)).max() > 0 for g in ("E", "R", "S")):
                raise DomainError("a nontrivial representation needs chi values for the coset representatives")
            return np.broadcast_to(self.v, (n, spec.dim))
        if isinstance(chi, dict):
            M = coset_matrices(G, c, d)
            vals = [np.atleast_2d(np.asarray(chi[coset_key(G, m)], dtype=complex)) for m in M]
            X = np.stack([np.broadcast_to(x, (spec.dim, spec.dim)) if x.size == 1 else x for x in vals])
        else:
            X = np.asarray(chi(coset_matrices(G, c, d)), dtype=complex)
        if X.ndim == 1:
            return np.conj(X)[:, None] * self.v[None, :]
        return np.einsum("nji,j->ni", np.conj(X), self.v)

    def weights(self, z: np.ndarray, r: float) -> np.ndarray:
        """(len(z), n_cosets) array of r(MP)^(1+s)."""
        z0 = _reduce_to_cell(np.asarray(z, dtype=complex), self.G.cusp_lattice)
        den = np.abs(np.outer(z0, self.cc) + self.dc) ** 2 + np.abs(self.cc) ** 2 * r * r
        return (r / den) ** (1 + self.s)

    def batch(self, z, r: float) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        step = max(1, CHUNK * 64 // max(1, len(self.cc)))
        chunks = [z[i:i + step] for i in range(0, len(z), step)]
        work = lambda zz: self.weights(zz, r) @ self.vecs
        threads = worker_count()
        if threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(work, chunks))
        else:
            parts = [work(zz) for zz in chunks]
        return np.concatenate(parts)

    def evaluate(self, P: PointH3) -> EisensteinEval:
        w = self.weights(np.array([P.z]), P.r)[0]
        value = w @ self.vecs
        tail = float(np.linalg.norm(w[self.last_shell] @ self.vecs[self.last_shell]))
        return EisensteinEval(value=value, s=self.s, coset_bound=self.H, tail_indicator=tail, n_cosets=len(w))

    def __call__(self, P: PointH3) -> np.ndarray:
        return self.evaluate(P).value


def eisenstein_direct(G: BianchiGroup, spec: UnitaryRepSpec, v, P: PointH3, s: complex, H: int,
                      chi: Callable | dict | None = None) -> EisensteinEval:
    return EisensteinSampler(G, spec, v, s, H, chi).evaluate(P)


def laplace_eigen_check(sampler: Callable[[PointH3], complex], s: complex, P: PointH3, step: float = 1e-3) -> float:
    """|Delta_h f(P) - (1 - s^2) f(P)| / |f(P)| with Delta = -r^2 (f_xx + f_yy + f_rr) + r f_r."""
    if not 0 < step < P.r:
        raise DomainError(f"step must lie in (0, r), got {step}")
    f = lambda dz, dr: np.asarray(sampler(PointH3(P.z + dz, P.r + dr)), dtype=complex)
    f0 = f(0, 0); h2 = step * step
    fxx = (f(step, 0) - 2 * f0 + f(-step, 0)) / h2
    fyy = (f(1j * step, 0) - 2 * f0 + f(-1j * step, 0)) / h2
    fp, fm = f(0, step), f(0, -step)
    frr = (fp - 2 * f0 + fm) / h2; fr = (fp - fm) / (2 * step)
    lap = -P.r ** 2 * (fxx + fyy + frr) + P.r * fr
    return float(np.linalg.norm(lap - (1 - complex(s) ** 2) * f0) / np.linalg.norm(f0))


def fourier_coefficients(sampler, lat: Lattice, r: float, modes, n_grid: int = 32, tol: float = 1e-6) -> list:
    """g_mu(r) = (1/|L|) int_P f(z + rj) e^{-2 pi i <mu, z>} dz for mu = a mu1 + b mu2, modes given as (a, b).

    The periodic rectangle rule on an n_grid^2 lattice-coordinate grid is an FFT. sampler is
    called on PointH3, or on (z array, r) through its batch method when it has one.
    """
    if not r > 0:
        raise DomainError(f"height must be positive, got {r}")
    batch = getattr(sampler, "batch", None)
    sample = (lambda zs: np.asarray(batch(zs, r))) if batch else \
        (lambda zs: np.array([np.asarray(sampler(PointH3(z, r))) for z in zs]))
    probe = np.array([0.1234 + 0.0567j, 0.3 + 0.2 * lat.tau, 0.71 + 0.45 * lat.tau], dtype=complex)
    base = sample(probe)
    for shift in (1.0, lat.tau):
        moved = sample(probe + shift)
        mismatch = np.abs(moved - base).max() / max(1.0, np.abs(base).max())
        if mismatch > tol:
            raise PeriodicityViolation(f"sampler not periodic under {shift}: mismatch {mismatch:.3g}")
    t = np.arange(n_grid) / n_grid
    Z = (t[:, None] + t[None, :] * lat.tau).ravel()
    F = sample(Z).reshape(n_grid, n_grid, *np.shape(base)[1:])
    C = np.fft.fft2(F, axes=(0, 1)) / n_grid ** 2
    return [C[int(a) % n_grid, int(b) % n_grid] for a, b in modes]
