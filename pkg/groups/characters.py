"""One-dimensional congruence characters of PSL(2, O_d) given by entry formulas.

sign2 (d=1): reduce mod (1+i) into SL(2, F_2) = S_3 and take the sign.
cubic3 (d=3): reduce mod (1-omega) into SL(2, F_3) and map onto SL(2, F_3)/Q_8 = Z/3,
with the class of [[1, 1], [0, 1]] sent to exp(2 pi i/3).
Both residue fields are reached by x + y*omega -> x + y, since omega = 1 modulo the prime.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy

from core.errors import DomainError

_MODULUS = {"trivial": None, "sign2": 2, "cubic3": 3}
_GROUP = {"sign2": 1, "cubic3": 3}


def _reduce(M, p: int) -> tuple:
    r = (np.asarray(M, dtype=np.int64).sum(axis=-1)) % p
    return r[..., 0], r[..., 1], r[..., 2], r[..., 3]


def _mul_mod(A, B, p):
    a, b, c, d = A; e, f, g, h = B
    return (a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p


def _is_identity(A):
    a, b, c, d = A
    return (a == 1) & (b == 0) & (c == 0) & (d == 1)


def sign2_exponent(M) -> np.ndarray:
    a, b, c, d = _reduce(M, 2)
    return (((a + d) % 2 == 0) & ~_is_identity((a, b, c, d))).astype(np.int64)


def cubic3_exponent(M) -> np.ndarray:
    A = _reduce(M, 3)
    A2 = _mul_mod(A, A, 3); q8 = _is_identity(_mul_mod(A2, A2, 3))
    a, b, c, d = A
    B = (a, (2 * a + b) % 3, c, (2 * c + d) % 3)      # A T^-1
    B2 = _mul_mod(B, B, 3); in_t = _is_identity(_mul_mod(B2, B2, 3))
    return np.where(q8, 0, np.where(in_t, 1, 2)).astype(np.int64)


@dataclass(frozen=True)
class CongruenceCharacter:
    """chi(M) = exp(2 pi i exponent(M) / order) on ring matrices of shape (..., 4, 2)."""
    name: str
    d: int
    order: int

    def exponent(self, M) -> np.ndarray:
        if self.name == "trivial":
            return np.zeros(np.shape(M)[:-2], dtype=np.int64)
        return sign2_exponent(M) if self.name == "sign2" else cubic3_exponent(M)

    def __call__(self, M) -> np.ndarray:
        return np.exp(2j * np.pi * self.exponent(M) / self.order)

    def exact(self, M):
        k = int(self.exponent(M))
        angle = 2 * sympy.pi * sympy.Rational(k, self.order)
        return sympy.cos(angle) + sympy.I * sympy.sin(angle)

    @property
    def trivial(self) -> bool: return self.name == "trivial"


def character(name: str, d: int) -> CongruenceCharacter:
    if name not in _MODULUS:
        raise DomainError(f"unknown character {name!r}; known: {sorted(_MODULUS)}")
    if name != "trivial" and _GROUP[name] != d:
        raise DomainError(f"character {name} is defined for d={_GROUP[name]}, not d={d}")
    return CongruenceCharacter(name=name, d=d, order=_MODULUS[name] or 1)


def nontrivial_character(d: int) -> CongruenceCharacter:
    return character("sign2" if d == 1 else "cubic3", d)
