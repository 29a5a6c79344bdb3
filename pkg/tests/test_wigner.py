import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from sympy import Rational
from sympy.physics.quantum.cg import CG

from hypersqueeze.wigner import (clebsch_gordan, coupling_table, magnetic_values, spin_matrices, twice,
                                 wigner_D, wigner_d)

half_spins = st.integers(0, 8).map(lambda k: Fraction(k, 2))


def test_twice():
    assert twice(Fraction(3, 2)) == 3
    assert twice(2) == 4
    with pytest.raises(ValueError):
        twice(Fraction(1, 3))


def test_spin_half_example():
    b = 0.9
    d = wigner_d(Fraction(1, 2), b)
    c, s = math.cos(b / 2), math.sin(b / 2)
    assert np.allclose(d, [[c, -s], [s, c]])


@settings(max_examples=40, deadline=None)
@given(half_spins, st.floats(-math.pi, math.pi))
def test_small_d_vs_matrix_exponential(spin, beta):
    _, Sy, _ = spin_matrices(spin)
    ref = scipy.linalg.expm(-1j * beta * Sy)
    assert np.max(np.abs(wigner_d(spin, beta) - ref)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(half_spins, st.floats(0, 2 * math.pi), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_big_D_unitary(spin, a, b, g):
    D = wigner_D(spin, a, b, g)
    assert np.max(np.abs(D.conj().T @ D - np.eye(D.shape[0]))) < 1e-12


def test_transpose_identity():
    # d(beta)^T = d(-beta)
    spin, beta = Fraction(3, 2), 1.1
    assert np.allclose(wigner_d(spin, beta).T, wigner_d(spin, -beta))


def test_spin_matrices_algebra():
    Sx, Sy, Sz = spin_matrices(2)
    assert np.allclose(Sx @ Sy - Sy @ Sx, 1j * Sz)
    assert np.allclose(Sx @ Sx + Sy @ Sy + Sz @ Sz, 6 * np.eye(5))
    assert np.allclose(magnetic_values(Fraction(3, 2)), [1.5, 0.5, -0.5, -1.5])


def _cg_cases():
    out = []
    for two_j1 in range(0, 5):
        for two_j2 in range(0, 5):
            for two_J in range(abs(two_j1 - two_j2), two_j1 + two_j2 + 1, 2):
                for two_m1 in range(-two_j1, two_j1 + 1, 2):
                    for two_m2 in range(-two_j2, two_j2 + 1, 2):
                        if abs(two_m1 + two_m2) <= two_J:
                            out.append((two_j1, two_m1, two_j2, two_m2, two_J))
    return out


@pytest.mark.parametrize("case", _cg_cases()[::7])
def test_cg_vs_sympy(case):
    j1, m1, j2, m2, J = (Rational(x, 2) for x in case)
    ours = clebsch_gordan(*(Fraction(x, 2) for x in case), Fraction(case[1] + case[3], 2))
    ref = float(CG(j1, m1, j2, m2, J, m1 + m2).doit())
    assert ours == pytest.approx(ref, abs=1e-14)


def test_cg_examples():
    h = Fraction(1, 2)
    assert clebsch_gordan(h, h, h, -h, 0, 0) == pytest.approx(1 / math.sqrt(2))
    assert clebsch_gordan(h, -h, h, h, 0, 0) == pytest.approx(-1 / math.sqrt(2))
    assert clebsch_gordan(2, 2, 2, 2, 4, 4) == pytest.approx(1.0)
    assert clebsch_gordan(1, 1, 1, 0, 0, 1) == 0.0


@pytest.mark.parametrize("two_s", range(0, 7))
def test_coupling_table_orthogonal(two_s):
    table = coupling_table(two_s)
    n = two_s + 1
    rows = []
    for I2 in range(0, 2 * two_s + 1, 2):
        for two_M in range(-I2, I2 + 1, 2):
            vec = np.zeros((n, n))
            for r1 in range(n):
                r2 = two_s - two_M // 2 - r1    # m1 + m2 = M in descending indices
                if 0 <= r2 < n:
                    vec[r1, r2] = table[I2, r1, r2]
            rows.append(vec.ravel())
    U = np.array(rows)
    assert U.shape == (n * n, n * n)
    assert np.max(np.abs(U @ U.T - np.eye(n * n))) < 1e-13
    assert not table[1::2].any()
