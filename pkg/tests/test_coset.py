import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypersqueeze.coset import (K, SqueezeParams, compact_hopf, coset_checks, coset_matrix, decompose,
                                hopf_checks, noncompact_hopf, polar_to_cartesian, su11_checks,
                                su11_coset, su11_element, su2_checks, unit_vector)

rhos = st.floats(0.0, 3.0)
polar = st.floats(0.0, math.pi)
azimuth = st.floats(0.0, 2 * math.pi, exclude_max=True)


def test_parameter_validation():
    with pytest.raises(ValueError):
        SqueezeParams(-0.1, 0, 0, 0)
    with pytest.raises(ValueError):
        SqueezeParams(1, 4.0, 0, 0)
    with pytest.raises(ValueError):
        SqueezeParams(1, 0, 0, 2 * math.pi)
    with pytest.raises(ValueError):
        SqueezeParams(float("nan"), 0, 0, 0)


@given(rhos, polar, polar, azimuth)
def test_point_on_hyperboloid(rho, chi, theta, phi):
    x = polar_to_cartesian(SqueezeParams(rho, chi, theta, phi))
    assert -np.sum(x[:4] ** 2) + x[4] ** 2 == pytest.approx(1.0, rel=1e-12)
    assert np.linalg.norm(unit_vector(chi, theta, phi)) == pytest.approx(1.0)


def test_polar_examples():
    x = polar_to_cartesian(SqueezeParams(1.0, 0.0, 0.3, 0.2))
    assert np.allclose(x, [0, 0, 0, math.sinh(1.0), math.cosh(1.0)])
    x = polar_to_cartesian(SqueezeParams(2.0, math.pi / 2, math.pi / 2, 0.0))
    assert np.allclose(x, [math.sinh(2.0), 0, 0, 0, math.cosh(2.0)])


def test_coset_entry_example():
    rho, chi, theta = 1.1, 0.4, 0.9
    M = coset_matrix(SqueezeParams(rho, chi, theta, 0.3))
    expected = -math.sinh(rho / 2) * (math.cos(chi) + 1j * math.sin(chi) * math.cos(theta))
    assert M[0, 2] == pytest.approx(expected)
    assert M[0, 0] == pytest.approx(math.cosh(rho / 2))


def test_identity_at_origin():
    assert np.allclose(coset_matrix(SqueezeParams(0.0, 1.0, 2.0, 3.0)), np.eye(4))


@settings(max_examples=60)
@given(rhos, polar, polar, azimuth)
def test_coset_identities(rho, chi, theta, phi):
    res = coset_checks(SqueezeParams(rho, chi, theta, phi))
    worst = max(res, key=res.get)
    assert res[worst] <= 1e-12, (worst, res[worst])


@given(rhos, polar, polar, azimuth)
def test_pseudo_unitarity(rho, chi, theta, phi):
    M = coset_matrix(SqueezeParams(rho, chi, theta, phi))
    assert np.max(np.abs(M.conj().T @ K @ M - K)) < 1e-12


def test_gauss_factors_are_triangular():
    dec = decompose(SqueezeParams(0.8, 0.6, 1.2, 2.0))
    assert np.allclose(dec.gauss_upper[2:, :2], 0)
    assert np.allclose(dec.gauss_lower[:2, 2:], 0)
    d = dec.gauss_diagonal
    assert np.allclose(d, np.diag(np.diag(d)))


@given(st.floats(0.0, math.pi, exclude_max=True), azimuth,
       st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)))
def test_hopf_map_any_spinor(theta, phi, raw):
    psi = np.array([raw[0] + 1j * raw[1], raw[2] + 1j * raw[3]])
    norm = np.linalg.norm(psi)
    if norm < 1e-3:
        return
    res = hopf_checks(SqueezeParams(0.9, 0.7, theta, phi), psi / norm)
    assert max(res.values()) < 1e-12


def test_compact_hopf_example():
    psi, x = compact_hopf(0.0, math.pi / 2, 0.0)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    assert np.allclose(x, [1, 0, 0])
    _, x = compact_hopf(0.7, 1.3, 2.0)
    assert np.allclose(x, [math.sin(1.3) * math.cos(0.7), math.sin(1.3) * math.sin(0.7), math.cos(1.3)])


def test_noncompact_hopf_example():
    psi, x = noncompact_hopf(0.4, 1.2, 0.9)
    assert abs(psi[0]) ** 2 - abs(psi[1]) ** 2 == pytest.approx(1.0)
    assert x[2] ** 2 - x[0] ** 2 - x[1] ** 2 == pytest.approx(1.0)
    assert x[2] == pytest.approx(math.cosh(1.2))


@settings(max_examples=60)
@given(st.floats(0.0, 3.0), azimuth, azimuth)
def test_su2_forms(theta, phi, chi):
    # the Gauss factors grow like tan(theta/2) and cancel near the south pole
    assert max(su2_checks(theta, phi, chi).values()) <= 1e-12


@given(st.floats(3.0, math.pi), azimuth, azimuth)
def test_su2_forms_near_pole(theta, phi, chi):
    res = su2_checks(theta, phi, chi)
    res.pop("gauss")
    assert max(res.values()) <= 1e-12


@settings(max_examples=60)
@given(rhos, azimuth, azimuth)
def test_su11_forms(rho, phi, chi):
    res = su11_checks(rho, phi, chi)
    assert max(res.values()) <= 1e-12, res
    assert "epsilon_form" in res


def test_su11_entry_example():
    rho, phi = 1.4, 0.8
    assert su11_coset(rho, phi)[0, 1] == pytest.approx(-math.sinh(rho / 2) * np.exp(1j * phi))
    D = su11_element(phi, rho, 0.3)
    assert abs(D[0, 1]) == pytest.approx(math.sinh(rho / 2))
