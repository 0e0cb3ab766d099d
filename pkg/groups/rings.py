"""Exact arithmetic in O_d = Z[omega] for d in {1, 3}.

Elements are int64 arrays whose last axis holds the coordinates (x, y) of x + y*omega.
Matrices are arrays of shape (..., 4, 2) holding the entries a, b, c, d.
Everything broadcasts, so whole pools of elements are handled in one call.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from core.errors import DomainError
from core.geometry import MoebiusElt

# omega^2 = r0 + r1*omega
_REDUCT = {1: (-1, 0), 3: (-1, -1)}
# fixed odd multipliers for row hashing of canonical matrices (wraps mod 2^64)
_HASH_MUL = np.array([0x9E3779B97F4A7C15, 0xC2B2AE3D27D4EB4F, 0x165667B19E3779F9, 0x27D4EB2F165667C5,
                      0x94D049BB133111EB, 0xBF58476D1CE4E5B9, 0xD6E8FEB86659FD93, 0xFF51AFD7ED558CCD], dtype=np.uint64)


def _arr(p): return np.asarray(p, dtype=np.int64)


@dataclass(frozen=True)
class QuadraticRing:
    d: int

    def __post_init__(self):
        if self.d not in _REDUCT:
            raise DomainError(f"only d in {{1, 3}} are implemented, got d={self.d}")

    @property
    def reduct(self) -> tuple[int, int]: return _REDUCT[self.d]

    @property
    def omega(self) -> complex:
        return 1j if self.d == 1 else complex(-0.5, math.sqrt(3) / 2)

    @property
    def units(self) -> np.ndarray:
        if self.d == 1:
            return _arr([[1, 0], [0, 1], [-1, 0], [0, -1]])
        return _arr([[1, 0], [0, 1], [-1, -1], [-1, 0], [0, -1], [1, 1]])

    def element(self, x: int, y: int = 0) -> np.ndarray: return _arr([x, y])

    def mul(self, p, q) -> np.ndarray:
        p = _arr(p); q = _arr(q); r0, r1 = self.reduct
        t = p[..., 1] * q[..., 1]
        return np.stack([p[..., 0] * q[..., 0] + r0 * t, p[..., 0] * q[..., 1] + p[..., 1] * q[..., 0] + r1 * t], axis=-1)

    def conj(self, p) -> np.ndarray:
        p = _arr(p)
        return np.stack([p[..., 0] + self.reduct[1] * p[..., 1], -p[..., 1]], axis=-1)

    def norm(self, p) -> np.ndarray:
        p = _arr(p); x, y = p[..., 0], p[..., 1]; r0, r1 = self.reduct
        return x * x + r1 * x * y - r0 * y * y

    def height(self, p) -> np.ndarray:
        return np.abs(_arr(p)).max(axis=-1)

    def to_complex(self, p) -> np.ndarray:
        p = _arr(p)
        return p[..., 0] + p[..., 1] * self.omega

    def is_zero(self, p) -> np.ndarray: return ~_arr(p).any(axis=-1)

    def divide_exact(self, p, q) -> tuple[np.ndarray, np.ndarray]:
        """(p/q, ok) where ok marks the entries with q | p; the quotient is garbage elsewhere."""
        num = self.mul(p, self.conj(q)); n = self.norm(q)
        safe = np.where(n == 0, 1, n)[..., None]
        ok = (n != 0) & ~(num % safe).any(axis=-1)
        return num // safe, ok

    def round_div(self, p, q) -> np.ndarray:
        """Nearest-coordinate quotient; the remainder has norm < N(q) since both rings are norm-Euclidean."""
        num = self.mul(p, self.conj(q)); n = self.norm(q)
        n = np.where(n == 0, 1, n)[..., None]
        return (2 * num + n) // (2 * n)

    def gcd(self, p, q) -> np.ndarray:
        p, q = (a.copy() for a in np.broadcast_arrays(_arr(p), _arr(q)))
        while True:
            nz = ~self.is_zero(q)
            if not nz.any():
                return p
            r = p - self.mul(q, self.round_div(p, q))
            p = np.where(nz[..., None], q, p); q = np.where(nz[..., None], r, q)

    def xgcd(self, p, q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(g, s, t) with s*p + t*q = g."""
        p, q = np.broadcast_arrays(_arr(p), _arr(q))
        r0, r1 = p.copy(), q.copy()
        one = np.zeros_like(r0); one[..., 0] = 1
        s0, s1, t0, t1 = one.copy(), np.zeros_like(r0), np.zeros_like(r0), one.copy()
        while True:
            nz = ~self.is_zero(r1)
            if not nz.any():
                return r0, s0, t0
            k = self.round_div(r0, r1); m = nz[..., None]
            r0, r1 = np.where(m, r1, r0), np.where(m, r0 - self.mul(k, r1), r1)
            s0, s1 = np.where(m, s1, s0), np.where(m, s0 - self.mul(k, s1), s1)
            t0, t1 = np.where(m, t1, t0), np.where(m, t0 - self.mul(k, t1), t1)

    def is_unit(self, p) -> np.ndarray: return self.norm(p) == 1

    def unit_inverse(self, u) -> np.ndarray: return self.conj(u)

    def box(self, H: int) -> np.ndarray:
        """All x + y*omega with max(|x|, |y|) <= H, ordered by height then coordinates."""
        r = np.arange(-H, H + 1)
        pts = np.stack(np.meshgrid(r, r, indexing="ij"), axis=-1).reshape(-1, 2)
        order = np.lexsort((pts[:, 1], pts[:, 0], np.abs(pts).max(axis=1)))
        return _arr(pts[order])

    def canonical_mod_units(self, p) -> np.ndarray:
        """Representative of p*units with the smallest (x, y) in lexicographic order."""
        p = _arr(p)
        orbit = self.mul(p[..., None, :], self.units)
        key = orbit[..., 0] * (1 << 32) + orbit[..., 1]
        idx = np.argmin(key, axis=-1)
        return np.take_along_axis(orbit, idx[..., None, None], axis=-2)[..., 0, :]

    # 2x2 matrices over O_d

    def mat(self, a, b, c, d) -> np.ndarray:
        return np.stack([_arr(a), _arr(b), _arr(c), _arr(d)], axis=-2)

    def mat_mul(self, A, B) -> np.ndarray:
        A = _arr(A); B = _arr(B); m = self.mul
        return np.stack([m(A[..., 0, :], B[..., 0, :]) + m(A[..., 1, :], B[..., 2, :]),
                         m(A[..., 0, :], B[..., 1, :]) + m(A[..., 1, :], B[..., 3, :]),
                         m(A[..., 2, :], B[..., 0, :]) + m(A[..., 3, :], B[..., 2, :]),
                         m(A[..., 2, :], B[..., 1, :]) + m(A[..., 3, :], B[..., 3, :])], axis=-2)

    def mat_inv(self, M) -> np.ndarray:
        # inverse of a determinant-one matrix
        M = _arr(M)
        return np.stack([M[..., 3, :], -M[..., 1, :], -M[..., 2, :], M[..., 0, :]], axis=-2)

    def mat_pow(self, M, n: int) -> np.ndarray:
        M = _arr(M)
        if n < 0:
            M, n = self.mat_inv(M), -n
        out = np.broadcast_to(self.mat([1, 0], [0, 0], [0, 0], [1, 0]), M.shape).copy()
        while n:
            if n & 1:
                out = self.mat_mul(out, M)
            M = self.mat_mul(M, M); n >>= 1
        return out

    def det(self, M) -> np.ndarray:
        M = _arr(M)
        return self.mul(M[..., 0, :], M[..., 3, :]) - self.mul(M[..., 1, :], M[..., 2, :])

    def trace(self, M) -> np.ndarray:
        M = _arr(M)
        return M[..., 0, :] + M[..., 3, :]

    def mat_height(self, M) -> np.ndarray:
        return np.abs(_arr(M)).reshape(*np.shape(M)[:-2], 8).max(axis=-1)

    def mat_complex(self, M) -> np.ndarray:
        return self.to_complex(M).reshape(*np.shape(M)[:-2], 2, 2)

    def to_moebius(self, M) -> MoebiusElt:
        return MoebiusElt.from_array(self.mat_complex(M))

    def from_moebius(self, g: MoebiusElt) -> np.ndarray:
        """Ring coordinates of a MoebiusElt whose entries lie in O_d; raises DomainError otherwise."""
        w = self.omega
        out = []
        for z in g.entries():
            y = z.imag / w.imag; x = z.real - y * w.real
            xi, yi = round(x), round(y)
            if abs(x - xi) > 1e-9 or abs(y - yi) > 1e-9:
                raise DomainError(f"entry {z} is not in O_{self.d}")
            out.append([xi, yi])
        return canonical(_arr(out))


def canonical(M) -> np.ndarray:
    """Fix the sign of each matrix so that its first nonzero coordinate is positive."""
    M = _arr(M); flat = M.reshape(*M.shape[:-2], 8)
    first = np.argmax(flat != 0, axis=-1)
    lead = np.take_along_axis(flat, first[..., None], axis=-1)
    return np.where(lead < 0, -M.reshape(flat.shape), flat).reshape(M.shape)


def row_hash(M) -> np.ndarray:
    """64-bit hash of canonical matrices; equal matrices modulo sign hash equally."""
    flat = np.ascontiguousarray(canonical(M).reshape(*np.shape(M)[:-2], 8)).view(np.uint64)
    return (flat * _HASH_MUL).sum(axis=-1, dtype=np.uint64)


def same_mod_sign(A, B) -> np.ndarray:
    A = _arr(A); B = _arr(B)
    ax = (-2, -1)
    return (A == B).all(axis=ax) | (A == -B).all(axis=ax)


def as_tuple(M) -> tuple:
    return tuple(tuple(int(v) for v in e) for e in _arr(M))
