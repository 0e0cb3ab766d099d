"""Upper half-space H^3 = {z + r j : r > 0}, Moebius actions and point-pair invariants."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from core.errors import DomainError, NotLoxodromic

DET_TOL = 1e-12
TRACE_TOL = 1e-10


@dataclass(frozen=True)
class PointH3:
    z: complex
    r: float

    def __post_init__(self):
        if not (self.r > 0) or not math.isfinite(self.r):
            raise DomainError(f"height must be positive, got r={self.r}")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "r", float(self.r))

    @property
    def x(self) -> float: return self.z.real

    @property
    def y(self) -> float: return self.z.imag


def _canonical_sign(e):
    scale = max(abs(v) for v in e)
    for v in e:
        if abs(v) > 1e-14 * scale:
            ang = cmath.phase(v)
            return e if -math.pi / 2 < ang <= math.pi / 2 else tuple(-w for w in e)
    return e


@dataclass(frozen=True, eq=False)
class MoebiusElt:
    """Element of PSL(2,C) stored as its canonical unimodular representative.

    Construction rescales the entries to det = 1 and fixes the sign so that the
    first nonzero entry of (a, b, c, d) has argument in (-pi/2, pi/2].
    """
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        e = tuple(complex(v) for v in (self.a, self.b, self.c, self.d))
        det = e[0] * e[3] - e[1] * e[2]
        if abs(det) < 1e-300 or not all(cmath.isfinite(v) for v in e):
            raise DomainError("singular or non-finite matrix")
        if abs(det - 1) > DET_TOL:
            root = cmath.sqrt(det)
            e = tuple(v / root for v in e)
        for name, v in zip("abcd", _canonical_sign(e)):
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, m) -> "MoebiusElt":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls) -> "MoebiusElt": return cls(1, 0, 0, 1)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def entries(self) -> tuple: return (self.a, self.b, self.c, self.d)

    def trace(self) -> complex: return self.a + self.d

    def inverse(self) -> "MoebiusElt": return MoebiusElt(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusElt") -> "MoebiusElt":
        return MoebiusElt.from_array(self.as_array() @ other.as_array())

    def conjugate_by(self, g: "MoebiusElt") -> "MoebiusElt":
        """g M g^-1."""
        return g @ self @ g.inverse()

    def isclose(self, other: "MoebiusElt", tol: float = 1e-10) -> bool:
        p = np.array(self.entries()); q = np.array(other.entries())
        scale = 1.0 + max(np.abs(p).max(), np.abs(q).max())
        return bool(np.abs(p - q).max() <= tol * scale or np.abs(p + q).max() <= tol * scale)

    def is_identity(self, tol: float = TRACE_TOL) -> bool:
        scale = 1.0 + max(abs(v) for v in self.entries())
        return max(abs(self.b), abs(self.c), abs(self.a - self.d)) <= tol * scale

    def __eq__(self, other):
        return isinstance(other, MoebiusElt) and self.isclose(other, 1e-12)

    def __hash__(self):
        return hash(tuple((round(v.real, 9), round(v.imag, 9)) for v in self.entries()))


class ElementClass(str, enum.Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"


def apply(M: MoebiusElt, P: PointH3) -> PointH3:
    cz_d = M.c * P.z + M.d
    den = abs(cz_d) ** 2 + abs(M.c) ** 2 * P.r ** 2
    w = ((M.a * P.z + M.b) * cz_d.conjugate() + M.a * M.c.conjugate() * P.r ** 2) / den
    return PointH3(w, P.r / den)


def delta(P: PointH3, Q: PointH3) -> float:
    return (abs(P.z - Q.z) ** 2 + P.r ** 2 + Q.r ** 2) / (2 * P.r * Q.r)


def distance(P: PointH3, Q: PointH3) -> float:
    return math.acosh(max(delta(P, Q), 1.0))


def classify(M: MoebiusElt, tol: float = TRACE_TOL) -> ElementClass:
    # identity is tested first; it is not counted as parabolic
    if M.is_identity(tol):
        return ElementClass.IDENTITY
    t2 = M.trace() ** 2
    scale = 1.0 + abs(t2)
    if abs(t2.imag) <= tol * scale:
        x = t2.real
        if abs(x - 4.0) <= tol * scale:
            return ElementClass.PARABOLIC
        if -tol * scale <= x < 4.0:
            return ElementClass.ELLIPTIC
    return ElementClass.LOXODROMIC


def normalize_loxodromic(M: MoebiusElt) -> tuple[complex, float]:
    """Return (a, N): the eigenvalue with |a| > 1 and the norm N = |a|^2."""
    if classify(M) is not ElementClass.LOXODROMIC:
        raise NotLoxodromic(f"{M} is {classify(M).value}")
    tr = M.trace()
    lam = (tr + cmath.sqrt(tr * tr - 4)) / 2
    if abs(lam) < 1:
        lam = 1 / lam
    return lam, abs(lam) ** 2


def _eigenvector(M: MoebiusElt, lam: complex) -> np.ndarray:
    if abs(M.c) > abs(M.b):
        return np.array([lam - M.d, M.c])
    if abs(M.b) > 0:
        return np.array([M.b, lam - M.a])
    return np.array([1, 0]) if abs(M.a - lam) < abs(M.d - lam) else np.array([0, 1])


def diagonalize_loxodromic(M: MoebiusElt) -> tuple[complex, float, np.ndarray]:
    """(a, N, P) with P unimodular and P^-1 M P = diag(a, 1/a) for the canonical representative of M."""
    lam, N = normalize_loxodromic(M)
    P = np.column_stack([_eigenvector(M, lam), _eigenvector(M, 1 / lam)]).astype(complex)
    P = P / cmath.sqrt(np.linalg.det(P))
    return lam, N, P


def fixed_points(M: MoebiusElt, tol: float = 1e-12) -> list:
    """Fixed points on the Riemann sphere; None stands for infinity."""
    a, b, c, d = M.entries()
    scale = 1.0 + max(abs(v) for v in M.entries())
    if abs(c) <= tol * scale:
        pts = [None]
        if abs(a - d) > tol * scale:
            pts.append(b / (d - a))
        return pts
    disc = cmath.sqrt((a + d) ** 2 - 4)
    roots = [((a - d) + disc) / (2 * c), ((a - d) - disc) / (2 * c)]
    return roots[:1] if abs(disc) <= 1e-9 * scale else roots


def phi_s(t: float, s: complex) -> complex:
    if not t > 1:
        raise DomainError(f"phi_s needs t > 1, got {t}")
    root = math.sqrt(t * t - 1)
    return complex((t + root) ** (-complex(s))) / root
