"""Unitary representations restricted to the cusp stabilizer Gamma_inf.

V'_inf is the joint fixed space of chi(R), chi(S) (dimension l_inf); V_inf is the part of
V'_inf fixed by chi(E) (dimension k_inf). The orthogonal complement of V'_inf is split into
joint eigenlines of chi(R), chi(S) with phases (theta_R, theta_S) in [0, 1).
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import linalg

from core.errors import DomainError, NonUnitaryInput, RelationViolation
from groups.bianchi import BianchiGroup, stabilizer_generators
from groups.characters import CongruenceCharacter
from lattice.sums import LatticeCharacter

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12
EIGEN_TOL = 1e-9
RELATION_TOL = 1e-10
GENERATORS = ("E", "R", "S")


@dataclass(frozen=True)
class UnitaryRepSpec:
    dim: int
    gen_images: dict = field(repr=False)
    extra_images: dict = field(default_factory=dict, repr=False)
    label: str = ""

    def __post_init__(self):
        missing = [g for g in GENERATORS if g not in self.gen_images]
        if missing:
            raise DomainError(f"representation lacks images for {missing}")
        images = {}
        for name, U in {**self.gen_images, **self.extra_images}.items():
            U = np.atleast_2d(np.asarray(U, dtype=complex))
            if U.shape != (self.dim, self.dim):
                raise DomainError(f"image of {name} has shape {U.shape}, expected {(self.dim, self.dim)}")
            err = np.abs(U.conj().T @ U - np.eye(self.dim)).max()
            if err > UNITARY_TOL:
                raise NonUnitaryInput(f"image of {name} is not unitary (residual {err:.3g})")
            images[name] = U
        object.__setattr__(self, "gen_images", {g: images[g] for g in self.gen_images})
        object.__setattr__(self, "extra_images", {g: images[g] for g in self.extra_images})

    def __getitem__(self, name: str) -> np.ndarray:
        return self.gen_images[name] if name in self.gen_images else self.extra_images[name]

    @classmethod
    def trivial(cls, dim: int = 1) -> "UnitaryRepSpec":
        I = np.eye(dim, dtype=complex)
        return cls(dim=dim, gen_images={g: I for g in GENERATORS}, label="trivial")

    @classmethod
    def from_character(cls, G: BianchiGroup, chi: CongruenceCharacter) -> "UnitaryRepSpec":
        st = stabilizer_generators(G)
        return cls(dim=1, gen_images={g: chi(getattr(st, g)).reshape(1, 1) for g in GENERATORS}, label=chi.name)

    @classmethod
    def from_json(cls, source) -> "UnitaryRepSpec":
        """{"dim": n, "generators": {"E": [[[re, im], ...], ...], ...}} from a path or a parsed dict."""
        obj = source if isinstance(source, dict) else json.loads(Path(source).read_text())
        try:
            n = int(obj["dim"])
            mats = {k: np.array(v, dtype=float).reshape(n, n, 2) for k, v in obj["generators"].items()}
        except (KeyError, ValueError, TypeError) as exc:
            raise DomainError(f"malformed representation spec: {exc}") from exc
        mats = {k: v[..., 0] + 1j * v[..., 1] for k, v in mats.items()}
        gens = {k: v for k, v in mats.items() if k in GENERATORS}
        extra = {k: v for k, v in mats.items() if k not in GENERATORS}
        return cls(dim=n, gen_images=gens, extra_images=extra, label=obj.get("label", ""))

    def to_json(self) -> dict:
        enc = lambda U: [[[float(z.real), float(z.imag)] for z in row] for row in U]
        return dict(dim=self.dim, label=self.label,
                    generators={k: enc(U) for k, U in {**self.gen_images, **self.extra_images}.items()})

    def conjugated(self, U: np.ndarray) -> "UnitaryRepSpec":
        Uh = U.conj().T
        return UnitaryRepSpec(dim=self.dim, gen_images={k: U @ M @ Uh for k, M in self.gen_images.items()},
                              extra_images={k: U @ M @ Uh for k, M in self.extra_images.items()}, label=self.label)


@dataclass(frozen=True)
class CuspRepData:
    dim: int
    k_inf: int
    l_inf: int
    index: int
    basis_partition: tuple[int, int, int]
    lambda_al: tuple
    theta_R: tuple
    theta_S: tuple
    parabolic_chars: tuple
    singular_basis: np.ndarray = field(repr=False)
    almost_singular_basis: np.ndarray = field(repr=False)

    def as_record(self) -> dict:
        return dict(dim=self.dim, k_inf=self.k_inf, l_inf=self.l_inf, index=self.index,
                    basis_partition=list(self.basis_partition),
                    lambda_al=[[z.real, z.imag] for z in self.lambda_al],
                    theta_R=list(self.theta_R), theta_S=list(self.theta_S))


def _mat_word(R, S, x: int, y: int) -> np.ndarray:
    return np.linalg.matrix_power(R, x) @ np.linalg.matrix_power(S, y)


def check_relations(spec: UnitaryRepSpec, G: BianchiGroup) -> None:
    st = stabilizer_generators(G)
    E, R, S = spec["E"], spec["R"], spec["S"]
    I = np.eye(spec.dim)
    if np.abs(R @ S - S @ R).max() > RELATION_TOL:
        raise RelationViolation("chi(R) and chi(S) do not commute")
    if np.abs(np.linalg.matrix_power(E, st.m) - I).max() > RELATION_TOL:
        raise RelationViolation(f"chi(E)^{st.m} != I")
    Einv = E.conj().T
    for col, X in enumerate((R, S)):
        x, y = (int(v) for v in st.action[:, col])
        if np.abs(E @ X @ Einv - _mat_word(R, S, x, y)).max() > RELATION_TOL:
            raise RelationViolation(f"chi(E) chi({'RS'[col]}) chi(E)^-1 != chi(R)^{x} chi(S)^{y}")


def _null_space(A: np.ndarray) -> np.ndarray:
    # columns spanning {v : Av = 0}, with singular values below EIGEN_TOL counted as zero
    _, sv, Vh = linalg.svd(A)
    rank = int((sv > EIGEN_TOL).sum())
    return Vh[rank:].conj().T


def joint_diagonalize(A: np.ndarray, B: np.ndarray, tol: float = EIGEN_TOL) -> np.ndarray:
    """Unitary Z with Z^H A Z and Z^H B Z both diagonal, for commuting normal A and B.

    A is diagonalised first; B is then diagonalised inside each eigenspace of A, eigenvalues of A
    closer than tol being treated as equal.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex)); B = np.atleast_2d(np.asarray(B, dtype=complex))
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), complex)
    _, Q = linalg.schur(A, output="complex")
    lam = np.diag(Q.conj().T @ A @ Q)
    free = np.ones(n, dtype=bool); cols = []
    for i in range(n):
        if not free[i]:
            continue
        group = free & (np.abs(lam - lam[i]) < tol); free &= ~group
        Qg = Q[:, group]
        _, W = linalg.schur(Qg.conj().T @ B @ Qg, output="complex")
        cols.append(Qg @ W)
    Z = np.hstack(cols)
    for name, M in (("A", A), ("B", B)):
        D = Z.conj().T @ M @ Z
        off = float(np.abs(D - np.diag(np.diag(D))).max())
        if off > RELATION_TOL * max(1.0, float(np.abs(M).max())):
            raise RelationViolation(f"joint diagonalisation leaves off-diagonal residual {off:.3g} in {name}")
    return Z


def _phase(z: complex) -> float:
    th = (math.atan2(z.imag, z.real) / (2 * math.pi)) % 1.0
    return 0.0 if th > 1 - EIGEN_TOL or th < EIGEN_TOL else th


def decompose_restriction(spec: UnitaryRepSpec, G: BianchiGroup) -> CuspRepData:
    check_relations(spec, G)
    n = spec.dim; E, R, S = spec["E"], spec["R"], spec["S"]
    I = np.eye(n)
    Vp = _null_space(np.vstack([R - I, S - I])); l = Vp.shape[1]
    if l:
        ev, Q = linalg.schur(Vp.conj().T @ E @ Vp, output="complex")
        lam = np.diag(ev); fixed = np.abs(lam - 1) < EIGEN_TOL
        B_s = Vp @ Q[:, fixed]; B_a = Vp @ Q[:, ~fixed]; lam_a = tuple(complex(z) for z in lam[~fixed])
        proj = Vp @ Vp.conj().T
        if np.abs(E @ proj - proj @ E).max() > RELATION_TOL:
            raise RelationViolation("chi(E) does not preserve V'_inf")
    else:
        B_s = np.zeros((n, 0), complex); B_a = np.zeros((n, 0), complex); lam_a = ()
    k = B_s.shape[1]
    W = _null_space(Vp.conj().T) if l else np.eye(n, dtype=complex)
    thR, thS = [], []
    if W.shape[1]:
        Rw = W.conj().T @ R @ W; Sw = W.conj().T @ S @ W
        Z = joint_diagonalize(Rw, Sw)
        thR = [_phase(z) for z in np.diag(Z.conj().T @ Rw @ Z)]
        thS = [_phase(z) for z in np.diag(Z.conj().T @ Sw @ Z)]
    chars = tuple([LatticeCharacter()] * l + [LatticeCharacter(u, v) for u, v in zip(thR, thS)])
    if any(u == 0.0 and v == 0.0 for u, v in zip(thR, thS)):
        raise RelationViolation("regular part contains a vector fixed by chi(R) and chi(S)")
    data = CuspRepData(dim=n, k_inf=k, l_inf=l, index=G.stabilizer_index, basis_partition=(k, l - k, n - l),
                       lambda_al=lam_a, theta_R=tuple(thR), theta_S=tuple(thS), parabolic_chars=chars,
                       singular_basis=B_s, almost_singular_basis=B_a)
    logger.debug("rep %s on d=%d: k=%d l=%d n=%d", spec.label, G.d, k, l, n)
    return data


def parabolic_characters(spec: UnitaryRepSpec, G: BianchiGroup) -> list[LatticeCharacter]:
    return list(decompose_restriction(spec, G).parabolic_chars)


def restriction_trace(spec: UnitaryRepSpec, n: int, m: int) -> complex:
    """tr chi(z -> z + n + m omega)."""
    return complex(np.trace(_mat_word(spec["R"], spec["S"], n, m)))
