import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypersqueeze.coset import SqueezeParams, coset_matrix, su11_coset
from hypersqueeze.fock import FockBasis, monomial, required_cutoff
from hypersqueeze.squeeze import squeezed_vacuum_numeric, two_mode_squeezed_vacuum
from hypersqueeze.wick import vacuum_expectation, wick_expectation, wick_polynomial

from conftest import GENERIC


def test_vacuum_words():
    assert vacuum_expectation(()) == 1
    assert vacuum_expectation(((0, False), (0, True))) == 1
    assert vacuum_expectation(((0, True), (0, False))) == 0
    # a a a+ a+ -> 2
    assert vacuum_expectation(((0, False), (0, False), (0, True), (0, True))) == 2


def test_identity_matrix_gives_vacuum_values():
    I = np.eye(4)
    assert wick_expectation(I, "") == 1
    assert wick_expectation(I, "Aa") == 0
    assert wick_expectation(I, "aA") == 1


def test_examples():
    rho, chi, theta, phi = GENERIC.as_tuple()
    M = coset_matrix(GENERIC)
    assert wick_expectation(M, "Aa").real == pytest.approx(math.sinh(rho / 2) ** 2)
    assert wick_expectation(M, "ac") == pytest.approx(
        -0.5 * math.sinh(rho) * (math.cos(chi) + 1j * math.sin(chi) * math.cos(theta)))
    assert wick_expectation(M, "aa") == pytest.approx(0, abs=1e-15)


def test_two_mode_layout():
    rho, phi = 1.3, 0.7
    M = su11_coset(rho, phi)
    assert wick_expectation(M, "Aa").real == pytest.approx(math.sinh(rho / 2) ** 2)
    b = FockBasis(2, 60)
    psi = two_mode_squeezed_vacuum(rho, phi, b).amplitudes
    for word in ("ab", "AaBb", "AB"):
        ref = np.vdot(psi, monomial(b, word) @ psi)
        assert wick_expectation(M, word) == pytest.approx(ref, abs=1e-10)


@settings(max_examples=8, deadline=None)
@given(st.floats(0.1, 1.0), st.floats(0, math.pi), st.floats(0, math.pi),
       st.floats(0, 2 * math.pi, exclude_max=True),
       st.sampled_from(["Aa", "ac", "bd", "AD", "Bc", "AaCc", "AaDd", "aC", "AaBb", "ACbd"]))
def test_wick_vs_numeric_state(rho, chi, theta, phi, word):
    p = SqueezeParams(rho, chi, theta, phi)
    b = FockBasis(4, required_cutoff(rho, 1e-12))
    psi = squeezed_vacuum_numeric(p, b).state.amplitudes
    ref = np.vdot(psi, monomial(b, word) @ psi)
    assert abs(wick_expectation(coset_matrix(p), word) - ref) < 1e-7


def test_polynomial_and_errors():
    M = coset_matrix(GENERIC)
    total = wick_polynomial(M, [(1, "Aa"), (2, "Bb")])
    assert total == pytest.approx(3 * wick_expectation(M, "Aa"))
    with pytest.raises(ValueError):
        wick_expectation(np.eye(3), "a")
