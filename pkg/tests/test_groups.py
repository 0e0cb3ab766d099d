import itertools
import math

import numpy as np
import pytest
import sympy

from core.errors import BudgetExceeded, DomainError, InexactInput
from core.geometry import ElementClass, MoebiusElt, classify
from groups.bianchi import (BianchiGroup, cuspidal_elliptic_classes, element_pool, enumerate_elements, expand_powers,
                            loxodromic_classes, nce_classes, reduced_system, stabilizer_generators, verify_cusp_identity)
from groups.characters import character, nontrivial_character
from groups.repchar import UnitaryRepSpec, decompose_restriction
from groups.rings import QuadraticRing, as_tuple, canonical


@pytest.mark.parametrize("d", [1, 3])
def test_ring_arithmetic(d):
    ring = QuadraticRing(d); rng = np.random.default_rng(d)
    p = rng.integers(-9, 10, size=(40, 2)); q = rng.integers(-9, 10, size=(40, 2))
    assert np.allclose(ring.to_complex(ring.mul(p, q)), ring.to_complex(p) * ring.to_complex(q))
    assert np.array_equal(ring.norm(ring.mul(p, q)), ring.norm(p) * ring.norm(q))
    assert np.allclose(ring.norm(p), np.abs(ring.to_complex(p)) ** 2)
    quot, ok = ring.divide_exact(ring.mul(p, q), q)
    nz = ~ring.is_zero(q)
    assert ok[nz].all() and np.array_equal(quot[nz], p[nz])


@pytest.mark.parametrize("d", [1, 3])
def test_xgcd_bezout(d):
    ring = QuadraticRing(d); rng = np.random.default_rng(10 + d)
    p = rng.integers(-20, 21, size=(30, 2)); q = rng.integers(-20, 21, size=(30, 2))
    g, s, t = ring.xgcd(p, q)
    assert np.array_equal(ring.mul(s, p) + ring.mul(t, q), g)
    keep = ~ring.is_zero(g)
    assert ring.divide_exact(p[keep], g[keep])[1].all() and ring.divide_exact(q[keep], g[keep])[1].all()


def test_units_and_unsupported_ring():
    assert len(QuadraticRing(1).units) == 4 and len(QuadraticRing(3).units) == 6
    assert (QuadraticRing(3).norm(QuadraticRing(3).units) == 1).all()
    with pytest.raises(DomainError):
        QuadraticRing(2)


def test_matrix_helpers():
    ring = QuadraticRing(1)
    M = ring.mat([2, 1], [1, 0], [1, 1], [1, 0])
    assert as_tuple(ring.det(M)[None])[0] == (1, 0)
    I = ring.mat_mul(ring.mat_pow(M, -1), M)
    assert as_tuple(I) == ((1, 0), (0, 0), (0, 0), (1, 0))
    assert as_tuple(canonical(-M)) == as_tuple(canonical(M))
    assert as_tuple(ring.from_moebius(ring.to_moebius(M))) == as_tuple(canonical(M))
    with pytest.raises(DomainError):
        ring.from_moebius(MoebiusElt(2, 0.5, 0, 0.5))


def test_group_constants(picard, eisenstein_group):
    assert picard.stabilizer_index == 2 and eisenstein_group.stabilizer_index == 3
    assert picard.covolume == pytest.approx(0.305321, abs=1e-6)
    assert eisenstein_group.covolume == pytest.approx(0.169157, abs=1e-6)
    st = stabilizer_generators(picard)
    assert st.epsilon == pytest.approx(1j) and st.m == 2


def test_pool_matches_brute_force(picard):
    ring = picard.ring; box = ring.box(1)
    idx = np.array(list(itertools.product(range(len(box)), repeat=4)))
    M = ring.mat(box[idx[:, 0]], box[idx[:, 1]], box[idx[:, 2]], box[idx[:, 3]])
    M = M[(ring.det(M) == [1, 0]).all(axis=-1)]
    expected = {as_tuple(m) for m in canonical(M)}
    pool = element_pool(picard, 1)
    assert {as_tuple(m) for m in pool} == expected
    assert len(pool) == len(expected)


def test_pool_budget(picard):
    with pytest.raises(BudgetExceeded):
        element_pool(picard, 3, cap=10)
    with pytest.raises(DomainError):
        element_pool(picard, 0)


def test_enumerate_elements_unimodular(eisenstein_group):
    for M in itertools.islice(enumerate_elements(eisenstein_group, 1), 100):
        assert M.a * M.d - M.b * M.c == pytest.approx(1.0)


def test_cuspidal_elliptic_classes(picard_ce, eisenstein_ce):
    assert len(picard_ce) == 4 and len(eisenstein_ce) == 3
    for c in picard_ce:
        assert c.complete and classify(c.rep) is ElementClass.ELLIPTIC
        assert c.one_minus_eps2_sq == 4 and c.centralizer_order == 4
    for c in eisenstein_ce:
        assert c.one_minus_eps2_sq == 3 and c.centralizer_order == 3


def test_cuspidal_classes_stable_under_larger_height(picard, picard_ce):
    wider = cuspidal_elliptic_classes(picard, 4)
    assert sorted(c.ring_rep for c in wider) == sorted(c.ring_rep for c in picard_ce)


@pytest.mark.parametrize("group, classes", [("picard", "picard_ce"), ("eisenstein_group", "eisenstein_ce")])
def test_cusp_identity_trivial(group, classes, request):
    G = request.getfixturevalue(group); ce = request.getfixturevalue(classes)
    data = decompose_restriction(UnitaryRepSpec.trivial(), G)
    assert verify_cusp_identity(G, data, ce) == 0
    data2 = decompose_restriction(UnitaryRepSpec.trivial(2), G)
    assert data2.k_inf == 2 and verify_cusp_identity(G, data2, ce) == 0


@pytest.mark.parametrize("group, classes", [("picard", "picard_ce"), ("eisenstein_group", "eisenstein_ce")])
def test_cusp_identity_nontrivial_character(group, classes, request):
    G = request.getfixturevalue(group); ce = request.getfixturevalue(classes)
    chi = nontrivial_character(G.d)
    data = decompose_restriction(UnitaryRepSpec.from_character(G, chi), G)
    traces = [chi.exact(np.array(c.ring_rep)) for c in ce]
    assert verify_cusp_identity(G, data, ce, traces) == 0
    # a wrong trace list leaves a visible residual
    assert verify_cusp_identity(G, data, ce, [1] * len(ce)) != 0


def test_cusp_identity_rejects_inexact_traces(picard, picard_ce):
    data = decompose_restriction(UnitaryRepSpec.trivial(), picard)
    with pytest.raises(InexactInput):
        verify_cusp_identity(picard, data, picard_ce, [1.0] * len(picard_ce))
    with pytest.raises(DomainError):
        verify_cusp_identity(picard, data, picard_ce, [1])
    assert verify_cusp_identity(picard, data, picard_ce, [sympy.Integer(1)] * len(picard_ce)) == 0


@pytest.mark.parametrize("name, d", [("sign2", 1), ("cubic3", 3)])
def test_characters_are_homomorphisms(name, d):
    G = BianchiGroup(d); ring = G.ring; chi = character(name, d)
    pool = element_pool(G, 1)
    A = pool[: 60]; B = pool[::-1][: 60]
    assert np.allclose(chi(ring.mat_mul(A, B)), chi(A) * chi(B))
    assert not np.allclose(chi(pool), 1)


def test_character_lookup():
    with pytest.raises(DomainError):
        character("sign2", 3)
    with pytest.raises(DomainError):
        character("quartic", 1)
    assert character("trivial", 3).trivial


def test_loxodromic_classes(picard):
    classes = loxodromic_classes(picard, 30.0, 3)
    assert classes
    for c in classes:
        assert c.N <= 30.0 * (1 + 1e-9) and abs(c.a0) > 1 and c.N0 == pytest.approx(abs(c.a0) ** 2)
        assert abs(c.zeta0 ** c.m + 1) < 1e-6
        assert classify(c.rep) is ElementClass.LOXODROMIC
    prim = reduced_system(classes)
    assert prim and all(c.power == 1 and c.torsion_power == 0 for c in prim)
    full = expand_powers(prim, 3)
    assert len(full) == sum(3 * c.m for c in prim)
    for c in full:
        tr = c.rep.trace()
        assert tr * tr == pytest.approx((c.a + 1 / c.a) ** 2, rel=1e-8)
    with pytest.raises(DomainError):
        expand_powers([full[-1]], 2)
    with pytest.raises(DomainError):
        loxodromic_classes(picard, 1.0, 3)


def test_nce_classes(picard):
    for c in nce_classes(picard, 3):
        assert 0 < c.k < c.m and c.torsion_order == c.m
        assert 0 < c.sin2 <= 1
        assert c.complete == (c.N0 is not None)
