import cmath
import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest

from core.errors import CaseUnsupported, DomainError, UnsupportedRegime
from core.geometry import MoebiusElt
from core.specfun import EULER_GAMMA
from groups.bianchi import LoxClass, expand_powers
from spectral.zeta import (MAX_KL, CuspTerm, FunctionalEqParams, ScatteringInput, XiInputs, admissible, case_root_order,
                           class_trace, cusp_integral_closed_form, cusp_integral_quadrature, cusp_integral_series,
                           cusp_terms, functional_constant_E, joint_eigenvalues, log_zeta_partial, psi_factor,
                           residue_formula, residue_table, xi_logderiv, zeta_logderiv_series, zeta_partial)

ANGLES = (math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi)


def synthetic(a, m=1, zeta0=-1 + 0j):
    return LoxClass(rep=MoebiusElt.from_array(np.diag([a, 1 / a])), a0=a, N0=abs(a) ** 2, m=m, zeta0=zeta0, reduced=True)


@pytest.fixture
def primitive():
    return [synthetic(2.0 + 0j), synthetic(1.5 + 1.2j), synthetic(2.5 + 0.5j, 2, 1j)]


def test_empty_class_list():
    assert zeta_partial(2.0, []) == 1
    assert log_zeta_partial(2.0, []) == 0
    assert zeta_logderiv_series(2.0, []) == 0


def test_admissibility():
    assert admissible(0, 0, 1 + 0j, 1j, 2)
    assert not admissible(0, 0, -1 + 0j, 1j, 2)
    assert admissible(1, 0, -1 + 0j, 1j, 2)
    with pytest.raises(DomainError):
        admissible(0, 0, 0.5 + 0j, 1j, 2)


def test_zeta_needs_convergent_region(primitive):
    with pytest.raises(DomainError):
        zeta_partial(1.0, primitive)
    with pytest.raises(DomainError):
        zeta_logderiv_series(0.5 + 3j, primitive)


@pytest.mark.parametrize("s", [2.0, 2.5, 3.0])
def test_logderiv_matches_numeric_derivative(primitive, s):
    full = expand_powers(primitive, 24); delta = 1e-4
    series = zeta_logderiv_series(s, full)
    numeric = (log_zeta_partial(s + delta, primitive) - log_zeta_partial(s - delta, primitive)) / (2 * delta)
    assert abs(series - numeric) <= 1e-6 * abs(series)


@pytest.mark.parametrize("t", ANGLES)
@pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
def test_cusp_integral_closed_form_vs_quadrature(s, t):
    assert cusp_integral_closed_form(s, t) == pytest.approx(cusp_integral_quadrature(s, t), rel=1e-8)


@pytest.mark.parametrize("t", [math.pi / 2, math.pi])
def test_cusp_series(t):
    assert cusp_integral_series(2.0, t) == pytest.approx(cusp_integral_closed_form(2.0, t), rel=1e-7)


def test_cusp_integral_large_s():
    assert cusp_integral_quadrature(50.0, math.pi / 2).real == pytest.approx(1 / 2500, rel=0.05)


def test_cusp_integral_domain():
    with pytest.raises(DomainError):
        cusp_integral_quadrature(-1.0, 1.0)
    with pytest.raises(DomainError):
        cusp_integral_quadrature(2.0, 0.0)
    with pytest.raises(DomainError):
        cusp_integral_closed_form(2.0, 1.0)


def test_residues():
    assert residue_table(1, 2, 2, ScatteringInput(2.0)).residue(-3) == 2
    gauss = residue_table(2, 1, 1, ScatteringInput(1.0))
    assert gauss.residue(-2) == 0 and gauss.residue(-1) == 1
    assert gauss.residue("s=0") == 0
    eis = residue_table(3, 1, 1, ScatteringInput(-1.0))
    assert eis.residue(-3) == Fraction(-1, 3) and eis.residue(-1) == Fraction(2, 3) and eis.residue(-2) == Fraction(2, 3)
    assert eis.residue("s=0") == -1
    assert eis.root_order() == 3
    assert residue_formula(3, 0, 1, -1) == Fraction(1, 6)


def test_case_root_orders():
    assert [case_root_order(i) for i in (1, 2, 3)] == [1, 1, 6]
    table = residue_table(3, 0, 1, ScatteringInput(0.0), n_min=-6)
    assert all((6 * r).denominator == 1 for _, r in table.entries)
    assert table.as_record()["case_root_order"] == 6


def test_divisor_table_errors():
    with pytest.raises(CaseUnsupported):
        residue_table(4, 1, 1, ScatteringInput(1.0))
    with pytest.raises(CaseUnsupported):
        case_root_order(6)
    with pytest.raises(DomainError):
        residue_table(2, 2, 1, ScatteringInput(0.0))
    with pytest.raises(DomainError):
        residue_table(2, 1, 1, ScatteringInput(0.0))
    with pytest.raises(DomainError):
        residue_table(1, 1, 2, ScatteringInput(1.0))
    with pytest.raises(KeyError):
        residue_table(2, 1, 1, ScatteringInput(1.0), n_min=-2).residue(-5)


def test_psi_factor():
    params = FunctionalEqParams(E=0.7, vol=0.305321, dimV=1, k_inf=1, l_inf=1, index=2)
    assert psi_factor(0.0, params) == pytest.approx(1)
    assert psi_factor(0.0, params, sign=-1) == pytest.approx(-1)
    s = 0.3 + 0.2j
    assert psi_factor(s, params) * psi_factor(-s, params) == pytest.approx(1, rel=1e-12)
    with pytest.raises(DomainError):
        psi_factor(0.5, params, sign=2)
    with pytest.raises(DomainError):
        psi_factor(2.0, params)
    with pytest.raises(UnsupportedRegime):
        psi_factor(0.5, FunctionalEqParams(E=0, vol=1, dimV=1, k_inf=0, l_inf=1, index=2))
    with pytest.raises(CaseUnsupported):
        psi_factor(0.5, FunctionalEqParams(E=0, vol=1, dimV=1, k_inf=1, l_inf=1, index=3))
    with pytest.raises(DomainError):
        FunctionalEqParams(E=0, vol=0, dimV=1, k_inf=1, l_inf=1, index=2)


def test_xi_conventions():
    inp = XiInputs(index=1, l_inf=0, trS0=0.0, vol=0.5, dimV=1, E=0.3, lox_series=lambda s: 0.0)
    s = 2.0 + 0.5j
    assert xi_logderiv(s, inp, "displayed") == pytest.approx(-0.3)
    assert xi_logderiv(s, inp) == pytest.approx(0.3 - 0.5 * s * s / (2 * math.pi))
    inp = XiInputs(index=1, l_inf=0, trS0=1.0, vol=0.5, dimV=1, E=0.0, lox_series=lambda s: 0.0)
    assert xi_logderiv(s, inp, "displayed") == pytest.approx(1 / (2 * s))
    with pytest.raises(DomainError):
        xi_logderiv(s, inp, "other")
    with pytest.raises(DomainError):
        xi_logderiv(0.5, inp)


def test_cusp_terms_picard(picard_ce):
    terms = cusp_terms(picard_ce)
    assert len(terms) == 4
    for t in terms:
        assert t.coef == pytest.approx(1 / 16) and t.t == pytest.approx(math.pi) and t.one_minus_eps2_sq == 4


def test_functional_constant():
    ce = [CuspTerm(coef=0.25, t=math.pi, log_c=math.log(2), one_minus_eps2_sq=4)]
    E = functional_constant_E(2, 1, 1.0, 0.5, ce, nce=0.1)
    assert E == pytest.approx(0.1 + 0.5 * math.log(2) + (0.5 - EULER_GAMMA + 0.5) / 2)
    assert functional_constant_E(1, 0, 0.0, 0.0) == 0


def test_joint_eigenvalues_with_scalar_combination():
    # chi(T0) + sqrt(2) chi(E) is a multiple of the identity
    A = np.diag(np.exp([-1j * math.pi / 4, 1j * math.pi / 4]))
    B = np.diag(np.exp([1j * math.pi / 6, -1j * math.pi / 6]))
    U, _ = np.linalg.qr(np.random.default_rng(9).standard_normal((2, 2)) + 1j * np.random.default_rng(10).standard_normal((2, 2)))
    eigs = joint_eigenvalues(U @ A @ U.conj().T, U @ B @ U.conj().T)
    eigs = sorted(eigs, key=lambda p: cmath.phase(p[0]))
    assert eigs[0][0] == pytest.approx(A[0, 0], abs=1e-10) and eigs[0][1] == pytest.approx(B[0, 0], abs=1e-10)
    assert eigs[1][0] == pytest.approx(A[1, 1], abs=1e-10) and eigs[1][1] == pytest.approx(B[1, 1], abs=1e-10)
    cls = dataclasses.replace(synthetic(2.0 + 0j), power=3, torsion_power=1)
    expected = np.trace(np.linalg.matrix_power(A, 3) @ B)
    assert class_trace(eigs, cls) == pytest.approx(expected, abs=1e-10)


def test_joint_eigenvalues_need_commuting_input():
    with pytest.raises(DomainError):
        joint_eigenvalues(np.array([[0, 1], [1, 0]]), np.diag([1, -1]))


def test_partial_product_refuses_norms_near_one():
    near_one = synthetic(1.00005 + 0j)
    with pytest.raises(UnsupportedRegime, match=str(MAX_KL)):
        log_zeta_partial(2.0, [near_one])
    with pytest.raises(DomainError):
        log_zeta_partial(2.0, [dataclasses.replace(near_one, N0=1.0)])
