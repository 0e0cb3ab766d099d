import math

import numpy as np
import pytest

from core.specfun import resolvent_pair
from groups.bianchi import expand_powers, loxodromic_classes, reduced_system
from groups.repchar import UnitaryRepSpec, decompose_restriction
from spectral.trace import (ClassBundle, cuspidal_elliptic_term, geometric_side, identity_term, log_A_bookkeeping, lox_term,
                            parabolic_term)
from spectral.zeta import ScatteringInput, zeta_logderiv_series

S, B = 1.5, 3.0


@pytest.fixture
def pair():
    return resolvent_pair(S, B)


def test_identity_term(pair):
    vol = 0.305321
    assert identity_term(pair, vol, 2).real == pytest.approx(vol * 2 * math.pi * (B - S) / (4 * math.pi ** 2), rel=1e-6)


def test_lox_term_is_series_difference(pair, picard):
    full = expand_powers(reduced_system(loxodromic_classes(picard, 20.0, 3)), 6)
    traces = [1.0] * len(full)
    expected = zeta_logderiv_series(S, full) / (2 * S) - zeta_logderiv_series(B, full) / (2 * B)
    assert lox_term(pair, full, traces) == pytest.approx(expected, rel=1e-12)


def test_parabolic_term_vanishes_without_cusp_part(pair):
    assert parabolic_term(pair, 0, 2, 1.0) == 0


def test_cuspidal_elliptic_term_is_linear_in_traces(pair, picard_ce):
    one = cuspidal_elliptic_term(pair, picard_ce, [1.0] * len(picard_ce))
    two = cuspidal_elliptic_term(pair, picard_ce, [2.0] * len(picard_ce))
    assert two == pytest.approx(2 * one)


def test_geometric_side_picard(pair, picard, picard_ce):
    rep = decompose_restriction(UnitaryRepSpec.trivial(), picard)
    side = geometric_side(pair, picard, rep, ClassBundle(ce=tuple(picard_ce)), None, eta=1.0)
    assert side.omitted == ["scattering_at_0", "phi_logderiv_integral"]
    assert side.log_A_residual == "0" and side.log_A_coefficient == "1"
    assert side["loxodromic"].value == 0
    assert np.isfinite(side.total)
    with pytest.raises(KeyError):
        side["missing"]
    rec = side.as_record()
    assert rec["omitted"] == side.omitted and len(rec["terms"]) == len(side.terms)


def test_geometric_side_with_scattering(pair, picard):
    rep = decompose_restriction(UnitaryRepSpec.trivial(), picard)
    side = geometric_side(pair, picard, rep, ClassBundle(), ScatteringInput(1.0), eta=1.0, phi_logderiv=0.0)
    assert side.omitted == []
    assert side["scattering_at_0"].value == pytest.approx(-pair.h(1) / 4)
    assert side.log_A_residual == ""


def test_log_A_coefficient_tracks_traces(picard, picard_ce):
    rep = decompose_restriction(UnitaryRepSpec.trivial(), picard)
    assert log_A_bookkeeping(picard, rep, picard_ce, None) == ("1", "0")
    # doubling every cuspidal-elliptic trace doubles that block: 1/2 + 2 * 1/2
    coefficient, residual = log_A_bookkeeping(picard, rep, picard_ce, [2] * len(picard_ce))
    assert (coefficient, residual) == ("3/2", "1/2")
