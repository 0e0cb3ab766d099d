"""Bianchi groups PSL(2, O_d) for d in {1, 3}.

Elements are enumerated under an entry-height bound and kept as exact ring matrices
(see groups.rings). Conjugacy is decided by bounded explicit search: two elements are
merged only when a conjugator from the same height-bounded pool is exhibited, and that
conjugator is stored with the class.
"""
from __future__ import annotations

import cmath
import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
import sympy
from scipy import special

from core.errors import BudgetExceeded, DomainError, InexactInput
from core.geometry import MoebiusElt, diagonalize_loxodromic
from groups.rings import QuadraticRing, as_tuple, canonical, row_hash, same_mod_sign
from lattice.sums import Lattice

logger = logging.getLogger(__name__)

DEFAULT_MAX_ELEMENTS = 5e7
UNIT_TOL = 1e-9


def max_elements() -> float:
    return float(os.environ.get("KLEINIAN_MAX_ELEMENTS", DEFAULT_MAX_ELEMENTS))


@dataclass(frozen=True)
class BianchiGroup:
    d: int

    def __post_init__(self):
        QuadraticRing(self.d)

    @property
    def ring(self) -> QuadraticRing: return QuadraticRing(self.d)

    @property
    def omega(self) -> complex: return self.ring.omega

    @property
    def ring_basis(self) -> tuple[complex, complex]: return (1 + 0j, self.omega)

    @property
    def cusp_lattice(self) -> Lattice: return Lattice(self.omega)

    @property
    def stabilizer_index(self) -> int:
        """[Gamma_inf : Gamma'_inf], the number of units modulo +-1."""
        return len(self.ring.units) // 2

    @property
    def torsion_order(self) -> int: return self.stabilizer_index

    @property
    def discriminant(self) -> int: return -4 if self.d == 1 else -3

    @property
    def torsion_units(self) -> np.ndarray:
        """The epsilon of the cuspidal elliptic cosets, one per +- pair: i, or omega and omega^2."""
        return np.array([[0, 1]] if self.d == 1 else [[0, 1], [-1, -1]], dtype=np.int64)

    @property
    def covolume(self) -> float:
        """vol(Gamma \\ H^3) = |D|^(3/2) zeta_K(2) / (4 pi^2) with zeta_K(2) = zeta(2) L(2, chi_D)."""
        D = abs(self.discriminant)
        chi = {4: {1: 1, 3: -1}, 3: {1: 1, 2: -1}}[D]
        L2 = sum(sign * special.zeta(2, r / D) for r, sign in chi.items()) / D ** 2
        return D ** 1.5 * (math.pi ** 2 / 6) * L2 / (4 * math.pi ** 2)


@dataclass(frozen=True)
class StabilizerData:
    """Generators of Gamma_inf: E = diag(eps, 1/eps), R = z + 1, S = z + omega.

    action is the integer matrix of mu -> eps^2 mu on the basis (1, omega); its columns give
    E R E^-1 and E S E^-1 as words R^x S^y.
    """
    E: np.ndarray
    R: np.ndarray
    S: np.ndarray
    epsilon: complex
    action: np.ndarray
    m: int


def stabilizer_generators(G: BianchiGroup) -> StabilizerData:
    ring = G.ring; eps = G.torsion_units[0]
    z = [0, 0]; one = [1, 0]
    E = ring.mat(eps, z, z, ring.unit_inverse(eps))
    R = ring.mat(one, one, z, one); S = ring.mat(one, [0, 1], z, one)
    e2 = ring.mul(eps, eps)
    action = np.column_stack([e2, ring.mul(e2, [0, 1])])
    return StabilizerData(E=E, R=R, S=S, epsilon=complex(ring.to_complex(eps)), action=action, m=G.torsion_order)


@lru_cache(maxsize=8)
def element_pool(G: BianchiGroup, H: int, cap: float | None = None) -> np.ndarray:
    """All (a, b, c, d) in O_d^4 with ad - bc = 1 and coordinate height <= H, one per +- pair.

    Sorted by (height, coordinates). The array is read-only and shared between callers.
    """
    if H < 1:
        raise DomainError(f"height bound must be >= 1, got {H}")
    cap = max_elements() if cap is None else float(cap)
    n_box = (2 * H + 1) ** 2
    if float(n_box) ** 3 > cap:
        raise BudgetExceeded(f"height {H} needs {n_box ** 3:.3g} candidate checks, cap is {cap:.3g}")
    ring = G.ring; box = ring.box(H); n = len(box)
    zero = np.zeros_like(box); found = []
    for u in ring.units:
        found.append(ring.mat(np.broadcast_to(u, box.shape), box, zero, np.broadcast_to(ring.unit_inverse(u), box.shape)))
    num = ring.mul(box[:, None, :], box[None, :, :]); num[..., 0] -= 1
    for c in box[1:]:
        b, ok = ring.divide_exact(num, c)
        ok &= ring.height(b) <= H
        ia, id_ = np.nonzero(ok)
        found.append(ring.mat(box[ia], b[ia, id_], np.broadcast_to(c, (len(ia), 2)), box[id_]))
    flat = np.unique(canonical(np.concatenate(found)).reshape(-1, 8), axis=0)
    order = np.lexsort(tuple(flat.T[::-1]) + (np.abs(flat).max(axis=1),))
    pool = flat[order].reshape(-1, 4, 2)
    pool.flags.writeable = False
    logger.debug("d=%d H=%d: %d elements from %d coefficient pairs", G.d, H, len(pool), n * n)
    return pool


def enumerate_elements(G: BianchiGroup, H: int) -> Iterator[MoebiusElt]:
    ring = G.ring
    for M in element_pool(G, H):
        yield ring.to_moebius(M)


def _conjugates(ring: QuadraticRing, pool: np.ndarray, T: np.ndarray) -> np.ndarray:
    return canonical(ring.mat_mul(ring.mat_mul(pool, T), ring.mat_inv(pool)))


def _commuting(ring: QuadraticRing, pool: np.ndarray, T: np.ndarray) -> np.ndarray:
    return same_mod_sign(ring.mat_mul(pool, T), ring.mat_mul(T, pool))


class _ClassMerger:
    """Greedy merging of candidates into conjugacy classes through the conjugator pool."""

    def __init__(self, ring: QuadraticRing, pool: np.ndarray, candidates: np.ndarray):
        self.ring = ring; self.pool = pool; self.cand = candidates
        self.hash = row_hash(candidates)
        self.cls = np.full(len(candidates), -1)

    def find(self, T: np.ndarray) -> list[tuple[int, np.ndarray]]:
        """Candidates conjugate to T, each with one exact conjugator X (X T X^-1 = +-candidate)."""
        orbit = _conjugates(self.ring, self.pool, T); h = row_hash(orbit)
        out = []
        for j in np.nonzero(np.isin(self.hash, h))[0]:
            idx = np.nonzero(h == self.hash[j])[0]
            good = idx[(orbit[idx] == self.cand[j]).all(axis=(1, 2))]
            if len(good):
                out.append((int(j), self.pool[good[0]]))
        return out

    def run(self) -> list[tuple[int, list]]:
        reps = []
        for i in range(len(self.cand)):
            if self.cls[i] >= 0:
                continue
            members = [(j, X) for j, X in self.find(self.cand[i]) if self.cls[j] < 0]
            for j, _ in members:
                self.cls[j] = len(reps)
            reps.append((i, members))
        return reps


def _members_record(cand, members) -> tuple:
    return tuple((as_tuple(cand[j]), as_tuple(X)) for j, X in members)


# cuspidal elliptic classes

@dataclass(frozen=True)
class CuspidalEllipticClass:
    rep: MoebiusElt
    epsilon: complex
    omega: complex
    centralizer_order: int
    c_abs: float
    ring_rep: tuple = field(repr=False)
    eps_ring: tuple = field(repr=False)
    omega_ring: tuple = field(repr=False)
    one_minus_eps2_sq: int = 0
    fixed_point: complex = 0j
    merged: tuple = field(default=(), repr=False)
    complete: bool = True

    def as_record(self) -> dict:
        return dict(ring_rep=[list(e) for e in self.ring_rep], epsilon=list(self.eps_ring), omega=list(self.omega_ring),
                    centralizer_order=self.centralizer_order, c_abs=self.c_abs,
                    one_minus_eps2_sq=self.one_minus_eps2_sq, merged=len(self.merged), complete=self.complete)


def _residues(ring: QuadraticRing, q: np.ndarray) -> list[np.ndarray]:
    """Representatives of O/qO modulo multiplication by squares of units."""
    squares = np.unique(ring.mul(ring.units, ring.units), axis=0)
    reps: list[np.ndarray] = []
    for p in ring.box(int(ring.norm(q))):
        if reps:
            diffs = p - ring.mul(squares[:, None, :], np.array(reps)[None, :, :])
            if ring.divide_exact(diffs, q)[1].any():
                continue
        reps.append(p)
    return reps


def _gamma_inf_torsion(G: BianchiGroup) -> list[tuple]:
    ring = G.ring; zero = np.zeros(2, dtype=np.int64); out = []
    for eps in G.torsion_units:
        einv = ring.unit_inverse(eps)
        modulus = np.array([1, 0]) - ring.mul(einv, einv)
        for w in _residues(ring, modulus):
            out.append((eps, w, canonical(ring.mat(eps, ring.mul(eps, w), zero, einv))))
    return out


def cuspidal_elliptic_classes(G: BianchiGroup, H: int = 3) -> list[CuspidalEllipticClass]:
    """Gamma-classes meeting Gamma_inf \\ Gamma'_inf.

    Gamma_inf-classes of q = [[eps, eps w], [0, 1/eps]] are indexed by eps modulo +- and w in
    O/(1 - eps^-2)O modulo unit squares; they are merged by conjugators from the height-H pool.
    """
    ring = G.ring; pool = element_pool(G, H)
    tors = _gamma_inf_torsion(G)
    merger = _ClassMerger(ring, pool, np.stack([g for _, _, g in tors]))
    heights = ring.mat_height(pool)
    out = []
    for i, members in merger.run():
        eps, w, g = tors[i]
        comm = _commuting(ring, pool, g)
        e2 = ring.mul(eps, eps); one_m = np.array([1, 0]) - e2
        # gamma with gamma(inf) = e2 w / (1 - e2): a (1 - e2) = e2 w c, c != 0
        lhs = ring.mul(pool[:, 0, :], one_m); rhs = ring.mul(ring.mul(e2, w), pool[:, 2, :])
        hit = np.nonzero((lhs == rhs).all(axis=1) & ~ring.is_zero(pool[:, 2, :]))[0]
        c_abs = float(abs(ring.to_complex(pool[hit[0], 2]))) if len(hit) else math.nan
        complete = bool(len(hit)) and not (heights[comm] >= H).any()
        if not complete:
            logger.warning("cuspidal elliptic class %s: search reached the height bound H=%d", as_tuple(g), H)
        if len(members) > 1:
            logger.debug("merged %d Gamma_inf-classes into %s", len(members), as_tuple(g))
        e2c = complex(ring.to_complex(e2))
        out.append(CuspidalEllipticClass(
            rep=ring.to_moebius(g), epsilon=complex(ring.to_complex(eps)), omega=complex(ring.to_complex(w)),
            centralizer_order=int(comm.sum()), c_abs=c_abs, ring_rep=as_tuple(g), eps_ring=tuple(int(v) for v in eps),
            omega_ring=tuple(int(v) for v in w), one_minus_eps2_sq=int(ring.norm(one_m)),
            fixed_point=e2c * complex(ring.to_complex(w)) / (1 - e2c),
            merged=_members_record(merger.cand, members[1:]), complete=complete))
    return out


def _exact(v):
    if isinstance(v, (bool, np.bool_)):
        raise InexactInput(f"boolean {v!r} is not a character trace")
    if isinstance(v, (int, np.integer)):
        return sympy.Integer(int(v))
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    if isinstance(v, sympy.Basic) and not v.atoms(sympy.Float):
        return v
    raise InexactInput(f"character trace {v!r} is not an exact cyclotomic number")


def verify_cusp_identity(G: BianchiGroup, rep, classes: Sequence[CuspidalEllipticClass], traces=None):
    """LHS - RHS of 2 sum tr chi(g_i) / (|C(g_i)| |1 - eps_i^2|^2) + l/I = k, exactly.

    rep is a CuspRepData; traces are exact values of tr chi(g_i), defaulting to dim V (trivial chi).
    """
    traces = [rep.dim] * len(classes) if traces is None else list(traces)
    if len(traces) != len(classes):
        raise DomainError(f"{len(traces)} traces for {len(classes)} classes")
    lhs = sum((2 * _exact(t) / (c.centralizer_order * c.one_minus_eps2_sq) for t, c in zip(traces, classes)), sympy.Integer(0))
    residual = sympy.simplify(sympy.expand(lhs + sympy.Rational(rep.l_inf, G.stabilizer_index) - rep.k_inf))
    logger.debug("cusp identity d=%d residual %s", G.d, residual)
    return residual


# loxodromic classes

@dataclass(frozen=True)
class LoxClass:
    """Class of T = T0^power E^torsion_power with C(T) = <T0> x <E>.

    a0 is the eigenvalue of T0 on the attracting eigenvector of T and zeta0 that of the
    torsion generator E, normalised to a primitive 2m-th root of unity.
    """
    rep: MoebiusElt
    a0: complex
    N0: float
    m: int
    zeta0: complex
    power: int = 1
    torsion_power: int = 0
    torsion_gen: MoebiusElt | None = field(default=None, repr=False)
    ring_rep: tuple | None = field(default=None, repr=False)
    members: tuple = field(default=(), repr=False)
    reduced: bool = False
    complete: bool = False

    @property
    def a(self) -> complex: return self.zeta0 ** self.torsion_power * self.a0 ** self.power

    @property
    def N(self) -> float: return self.N0 ** self.power

    def as_record(self) -> dict:
        return dict(ring_rep=None if self.ring_rep is None else [list(e) for e in self.ring_rep],
                    a0=[self.a0.real, self.a0.imag], N0=self.N0, m=self.m, zeta0=[self.zeta0.real, self.zeta0.imag],
                    power=self.power, torsion_power=self.torsion_power, reduced=self.reduced,
                    members=len(self.members), complete=self.complete)


def _is_torsion_trace(tr: np.ndarray) -> np.ndarray:
    # tr^2 real in [0, 4] only for rational integers |tr| <= 2 in these rings
    return (tr[..., 1] == 0) & (np.abs(tr[..., 0]) <= 2)


def _primitive_root_exponent(z: complex, m: int) -> int:
    return int(round(m * cmath.phase(z) / (2 * math.pi))) % m


def _torsion_generator(eigs: np.ndarray, m: int) -> int:
    """Index of the first element whose eigenvalue squared is a primitive m-th root of unity."""
    for i, e in enumerate(eigs):
        j = _primitive_root_exponent(e * e, m)
        if math.gcd(j, m) == 1:
            return i
    raise DomainError(f"no generator among {m} torsion elements")


def _match_power(r: complex, zeta: complex, m: int) -> int | None:
    for v in range(m):
        z = zeta ** v
        if min(abs(r - z), abs(r + z)) < 1e-6 * max(1.0, abs(r)):
            return v
    return None


def _axis_data(ring, pool, T, P: np.ndarray):
    """Split the centralizer of T into torsion and loxodromic parts, in the eigenbasis P."""
    C = pool[_commuting(ring, pool, T)]
    D = np.linalg.inv(P)[None] @ ring.mat_complex(C) @ P[None]
    diag = np.abs(D[:, 0, 1]) + np.abs(D[:, 1, 0]) <= 1e-8 * (1 + np.abs(D).max(axis=(1, 2)))
    C, e = C[diag], D[diag, 0, 0]
    tors = np.abs(np.abs(e) - 1) <= UNIT_TOL
    return C, e, tors


def _torsion_part(C, e, tors):
    m = int(tors.sum())
    if m <= 1:
        return 1, -1 + 0j, None
    k = _torsion_generator(e[tors], m)
    zeta = complex(e[tors][k]); Egen = C[tors][k]
    if abs(zeta ** m + 1) > 1e-6:
        zeta = -zeta
    return m, zeta, Egen


def loxodromic_classes(G: BianchiGroup, norm_bound: float, H: int) -> list[LoxClass]:
    """Loxodromic classes with N(T) <= norm_bound found among elements of height <= H.

    Completeness within norm_bound is not guaranteed, so every class carries complete=False.
    """
    if not norm_bound > 1:
        raise DomainError(f"norm_bound must exceed 1, got {norm_bound}")
    ring = G.ring; pool = element_pool(G, H)
    tr = ring.trace(pool)
    trc = ring.to_complex(tr)
    root = np.sqrt(trc * trc - 4 + 0j)
    lam = np.where(np.abs(trc + root) >= np.abs(trc - root), trc + root, trc - root) / 2
    N = np.abs(lam) ** 2
    sel = np.nonzero(~_is_torsion_trace(tr) & (N <= norm_bound * (1 + 1e-12)))[0]
    sel = sel[np.argsort(np.round(N[sel], 9), kind="stable")]
    merger = _ClassMerger(ring, pool, pool[sel])
    reps = merger.run()
    logger.debug("d=%d: %d loxodromic elements with N <= %g in %d classes", G.d, len(sel), norm_bound, len(reps))
    out: list[LoxClass] = []
    covered: set[int] = set()
    for cid, (i, members) in enumerate(reps):
        T = merger.cand[i]; Tm = ring.to_moebius(T)
        a, NT, P = diagonalize_loxodromic(Tm)
        C, e, tors = _axis_data(ring, pool, T, P)
        m, zeta, Egen = _torsion_part(C, e, tors)
        lox = ~tors
        mu = np.where(np.abs(e[lox]) >= 1, e[lox], 1 / e[lox]); Nmu = np.abs(mu) ** 2
        N0 = float(Nmu.min())
        if abs(N0 - NT) <= 1e-9 * NT:
            a0, N0, n, v = a, float(NT), 1, 0
        else:
            a0 = complex(mu[np.argmin(Nmu)]); n = int(round(math.log(NT) / math.log(N0)))
            v = _match_power(a / a0 ** n, zeta, m)
            if v is None:
                logger.warning("class %s: eigenvalue not of the form zeta^v a0^n", as_tuple(T))
                v = 0
        reduced = n == 1 and v == 0 and cid not in covered
        if reduced:
            covered |= _siblings(ring, merger, T, Egen, m)
        out.append(LoxClass(rep=Tm, a0=complex(a0), N0=N0, m=m, zeta0=zeta, power=n,
                            torsion_power=v, torsion_gen=None if Egen is None else ring.to_moebius(Egen),
                            ring_rep=as_tuple(T), members=_members_record(merger.cand, members), reduced=reduced))
    return out


def _siblings(ring, merger: _ClassMerger, T, Egen, m) -> set[int]:
    """Classes of T E^j (j >= 1) and T^-1 E^j, which share the centralizer of T."""
    Tinv = ring.mat_inv(T); out = set()
    words = [T, Tinv] if Egen is None else [ring.mat_mul(W, ring.mat_pow(Egen, j)) for W in (T, Tinv) for j in range(m)]
    for W in words[1:]:
        for j, _ in merger.find(canonical(W)):
            out.add(int(merger.cls[j]))
    return out


def reduced_system(classes: Sequence[LoxClass]) -> list[LoxClass]:
    return [c for c in classes if c.reduced]


def expand_powers(primitive: Sequence[LoxClass], n_max: int) -> list[LoxClass]:
    """All T0^n E^v for 1 <= n <= n_max and 0 <= v < m, from primitive classes."""
    out = []
    for c in primitive:
        if c.power != 1 or c.torsion_power != 0:
            raise DomainError("expand_powers needs primitive classes")
        for n in range(1, n_max + 1):
            Tn = _moebius_pow(c.rep, n)
            for v in range(c.m):
                rep = Tn if v == 0 or c.torsion_gen is None else Tn @ _moebius_pow(c.torsion_gen, v)
                out.append(LoxClass(rep=rep, a0=c.a0, N0=c.N0, m=c.m, zeta0=c.zeta0, power=n, torsion_power=v,
                                    torsion_gen=c.torsion_gen, reduced=False, complete=c.complete))
    return out


def _moebius_pow(g: MoebiusElt, n: int) -> MoebiusElt:
    return MoebiusElt.from_array(np.linalg.matrix_power(g.as_array(), n))


# non-cuspidal elliptic classes

@dataclass(frozen=True)
class NceClass:
    rep: MoebiusElt
    m: int
    k: int
    torsion_order: int
    N0: float | None
    complete: bool
    ring_rep: tuple | None = field(default=None, repr=False)
    members: tuple = field(default=(), repr=False)

    @property
    def sin2(self) -> float: return math.sin(math.pi * self.k / self.m) ** 2

    def as_record(self) -> dict:
        return dict(ring_rep=None if self.ring_rep is None else [list(e) for e in self.ring_rep], m=self.m, k=self.k,
                    torsion_order=self.torsion_order, N0=self.N0, complete=self.complete, members=len(self.members))


def _is_rational_square(q: Fraction) -> bool:
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    return a * a == q.numerator and b * b == q.denominator


def _noncuspidal_traces(G: BianchiGroup) -> list[int]:
    # fixed points lie in K iff tr^2 - 4 = -(4 - tr^2) is a square in Q(sqrt(-d))
    return [t for t in (-1, 0, 1) if not _is_rational_square(Fraction(4 - t * t, G.d))]


def _elliptic_basis(g: MoebiusElt) -> np.ndarray:
    _, P = np.linalg.eig(g.as_array())
    return P / np.sqrt(np.linalg.det(P))


def nce_classes(G: BianchiGroup, H: int) -> list[NceClass]:
    ring = G.ring; pool = element_pool(G, H)
    tr = ring.trace(pool)
    sel = np.nonzero((tr[:, 1] == 0) & np.isin(tr[:, 0], _noncuspidal_traces(G)) & ~ring.is_zero(pool[:, 2, :]))[0]
    merger = _ClassMerger(ring, pool, pool[sel])
    out = []
    for i, members in merger.run():
        R = merger.cand[i]; Rm = ring.to_moebius(R); P = _elliptic_basis(Rm)
        C, e, tors = _axis_data(ring, pool, R, P)
        m, zeta, _ = _torsion_part(C, e, tors)
        eR = (np.linalg.inv(P) @ Rm.as_array() @ P)[0, 0]
        k = _match_power(complex(eR), zeta, m) if m > 1 else None
        if not k:
            logger.warning("nce class %s: rotation power not resolved in its axis group", as_tuple(R))
            continue
        lox = ~tors
        N0 = float(np.max(np.stack([np.abs(e[lox]), 1 / np.abs(e[lox])]), axis=0).min() ** 2) if lox.any() else None
        out.append(NceClass(rep=Rm, m=m, k=k, torsion_order=m, N0=N0, complete=N0 is not None,
                            ring_rep=as_tuple(R), members=_members_record(merger.cand, members)))
    logger.debug("d=%d H=%d: %d non-cuspidal elliptic classes", G.d, H, len(out))
    return out
