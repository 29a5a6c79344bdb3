import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import GENERIC, HALF_PI
from hypersqueeze.coset import SqueezeParams
from hypersqueeze.fock import FockBasis, required_cutoff
from hypersqueeze.squeeze import (one_mode_squeezed_vacuum_numeric, squeezed_vacuum_numeric,
                                  two_mode_squeezed_vacuum)
from hypersqueeze.statistics import (argmax_two_s, closed_form_moments, entropy_series,
                                     one_mode_closed_moments, one_mode_state_moments, reduced_density,
                                     so21_closed_moments, so21_state_moments, so21_wick_moments,
                                     spin_sector_distribution, spin_sector_probabilities, state_moments,
                                     total_spin_probability, von_neumann_entropy, wick_moments)

params_st = st.builds(SqueezeParams, st.floats(0.0, 3.0), st.floats(0, math.pi), st.floats(0, math.pi),
                      st.floats(0, 2 * math.pi, exclude_max=True))


def test_total_spin_examples():
    assert total_spin_probability(0.0, 0) == 1.0
    assert total_spin_probability(0.0, 3) == 0.0
    rho = 1.0
    t2 = math.tanh(0.5) ** 2
    assert total_spin_probability(rho, 2) == pytest.approx(3 * t2 ** 2 / math.cosh(0.5) ** 4)


@given(st.floats(0.01, 4.0))
def test_distribution_sums_to_one(rho):
    dist = spin_sector_distribution(rho, 4000)
    assert dist.totals.sum() + dist.tail == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0.0, 8.0))
def test_argmax_matches_scan(rho):
    dist = spin_sector_distribution(rho, 2000)
    assert argmax_two_s(rho) == dist.argmax_two_s


@settings(max_examples=30)
@given(params_st, st.integers(0, 6))
def test_sector_rows_sum_to_total(p, k):
    P = spin_sector_probabilities(p, k)
    assert P.sum() == pytest.approx(total_spin_probability(p.rho, k), rel=1e-10, abs=1e-300)
    # rotations mix magnetic states unitarily, so each row carries an equal share
    assert np.allclose(P.sum(axis=1), total_spin_probability(p.rho, k) / (k + 1), atol=1e-15)


def test_moment_examples():
    m = closed_form_moments(SqueezeParams(1.0, 0.0, 0.7, 0.3))
    assert m["J(n_a,n_c)"] == pytest.approx(1.0)
    assert m["J(n_a,n_b)"] == pytest.approx(0.0)
    assert m["J(n_a,n_d)"] == pytest.approx(0.0)
    m = closed_form_moments(SqueezeParams(1.0, HALF_PI, HALF_PI, 0.0))
    assert m["J(n_a,n_d)"] == pytest.approx(1.0)
    assert m["J(n_a,n_c)"] == pytest.approx(0.0, abs=1e-15)
    rho = 1.7
    m = closed_form_moments(SqueezeParams(rho, 0.4, 0.4, 0.4))
    s2 = math.sinh(rho / 2) ** 2
    expected = math.sqrt(0.5 * s2 ** 2 + 0.5 * s2) / s2
    assert m["fluct(S)"] == pytest.approx(expected)
    assert math.isnan(closed_form_moments(SqueezeParams(0.0, 0, 0, 0))["J(n_a,n_b)"])


@settings(max_examples=30)
@given(params_st)
def test_closed_vs_wick(p):
    closed, wick = closed_form_moments(p), wick_moments(p)
    for key, value in closed.values.items():
        a, b = complex(value), complex(wick[key])
        if math.isnan(abs(a)):
            assert math.isnan(abs(b)), key
            continue
        # ratios such as fluct(S) grow without bound as rho -> 0
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a)) * math.cosh(p.rho) ** 2, key


@settings(max_examples=4, deadline=None)
@given(st.builds(SqueezeParams, st.floats(0.2, 1.0), st.floats(0, math.pi), st.floats(0, math.pi),
                 st.floats(0, 2 * math.pi, exclude_max=True)))
def test_wick_vs_state(p):
    b = FockBasis(4, required_cutoff(p.rho, 1e-12))
    state = state_moments(squeezed_vacuum_numeric(p, b).state, chi=p.chi)
    d, key = wick_moments(p).max_discrepancy(state, sorted(state.values))
    assert d <= 1e-6, key


@given(params_st)
def test_uncertainty_bound(p):
    m = closed_form_moments(p)
    assert m["var(X1)var(X2)"] >= 1 / 16 - 1e-12
    assert m["var(X3)var(X4)"] >= 1 / 16 - 1e-12


@given(st.floats(0.0, 3.0), st.floats(0, math.pi))
def test_rotated_quadratures_saturate_at_theta0(rho, chi):
    m = closed_form_moments(SqueezeParams(rho, chi, 0.0, 0.5))
    assert m["var(X1')"] == pytest.approx(0.25 * math.exp(-rho))
    assert m["var(X1')"] * m["var(X2')"] == pytest.approx(1 / 16)


def test_two_mode_references():
    rho, phi = 1.1, 0.6
    state = two_mode_squeezed_vacuum(rho, phi, FockBasis(2, 80))
    closed, wick, num = so21_closed_moments(rho, phi), so21_wick_moments(rho, phi), so21_state_moments(state)
    for k in closed:
        assert closed[k] == pytest.approx(wick[k], rel=1e-10), k
        assert closed[k] == pytest.approx(num[k], rel=1e-8), k


def test_one_mode_reference():
    rho, phi = 0.9, 1.2
    state = one_mode_squeezed_vacuum_numeric(rho, phi, FockBasis(1, 120))
    closed, num = one_mode_closed_moments(rho, phi), one_mode_state_moments(state, phi)
    for k in closed:
        assert closed[k] == pytest.approx(num[k], rel=1e-8), k
    assert num["var(X1')"] == pytest.approx(0.25 * math.exp(-rho), rel=1e-8)


def test_reduced_density_structure():
    p = GENERIC
    b = FockBasis(4, required_cutoff(p.rho, 1e-12))
    rd = reduced_density(squeezed_vacuum_numeric(p, b).state)
    assert rd.trace == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(rd.matrix, rd.matrix.conj().T)
    lam0 = math.cosh(p.rho / 2) ** -4
    lam1 = lam0 * math.tanh(p.rho / 2) ** 2
    assert rd.eigenvalues[0] == pytest.approx(lam0, rel=1e-8)
    # the spin-1/2 Schmidt value is doubly degenerate
    assert rd.eigenvalues[1:3] == pytest.approx([lam1, lam1], rel=1e-8)
    assert rd.eigenvalues[3] < lam1 * 0.99


def test_entropy_edges():
    assert entropy_series(0.0) == 0.0
    assert von_neumann_entropy(np.array([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(np.array([0.5, 0.5])) == pytest.approx(math.log(2))
    with pytest.raises(ValueError):
        entropy_series(1.0, "so31")


@given(st.floats(0.05, 4.0))
def test_so41_entropy_is_twice_so21(rho):
    assert entropy_series(rho, "so41") == pytest.approx(2 * entropy_series(rho, "so21"), rel=1e-9)


def test_entropy_increases_with_rho():
    vals = [entropy_series(0.1 * k) for k in range(1, 40)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
