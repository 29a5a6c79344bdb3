"""Wigner rotation matrices and Clebsch-Gordan coefficients.

Spins are passed as ``int``, ``float`` or ``Fraction`` values with ``2S``
integral.  Matrix rows and columns run over ``m = S, S-1, ..., -S`` and the
phase convention is Condon-Shortley, matching the Schwinger realisation
``S_+ = a^dag b`` on ``|n_a, n_b> = |S = (n_a+n_b)/2, m = (n_a-n_b)/2>``; the
row index of ``m`` is therefore ``n_b``.

Coefficients are assembled from exact integer arithmetic and only the final
square root is taken in floating point.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def twice(x) -> int:
    """``2 x`` as an int, rejecting values that are not half-integers."""
    d = 2 * Fraction(x)
    if d.denominator != 1:
        raise ValueError(f"{x} is not a half-integer")
    return int(d)


def _sqrt_ratio(num: int, den: int) -> float:
    return math.sqrt(Fraction(num, den))


@lru_cache(maxsize=256)
def _small_d_table(two_s: int):
    """Coefficient and exponent tables for ``d^S(beta)``.

    Returns arrays ``coef[r, c, k]``, ``pc[r, c, k]`` and ``ps[r, c, k]`` with
    ``d[r, c] = sum_k coef * cos(beta/2)**pc * sin(beta/2)**ps``.
    """
    n = two_s + 1
    kmax = two_s + 1
    coef = np.zeros((n, n, kmax))
    pc = np.zeros((n, n, kmax), dtype=np.int64)
    ps = np.zeros((n, n, kmax), dtype=np.int64)
    fac = [math.factorial(i) for i in range(two_s + 1)]
    for r in range(n):
        jm1 = two_s - r      # j + m'  (row)
        jm1b = r             # j - m'
        for c in range(n):
            jm = two_s - c   # j + m  (column)
            jmb = c          # j - m
            # (m' - m) in half units doubled: m' - m = c - r
            diff = c - r
            num = fac[jm1] * fac[jm1b] * fac[jm] * fac[jmb]
            for k in range(max(0, -diff), min(jm, jm1b) + 1):
                den = fac[jm - k] * fac[k] * fac[jm1b - k] * fac[k + diff]
                sign = -1 if (k + diff) % 2 else 1
                coef[r, c, k] = sign * _sqrt_ratio(num, den * den)
                pc[r, c, k] = two_s - 2 * k - diff
                ps[r, c, k] = 2 * k + diff
    return coef, pc, ps


def wigner_d(spin, beta: float) -> np.ndarray:
    """Small-d matrix ``<S m'| exp(-i beta S_y) |S m>`` (rows ``m'``)."""
    two_s = twice(spin)
    if two_s < 0:
        raise ValueError(f"spin must be non-negative, got {spin}")
    coef, pc, ps = _small_d_table(two_s)
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    return (coef * np.power(c, pc) * np.power(s, ps)).sum(axis=2)


def magnetic_values(spin) -> np.ndarray:
    two_s = twice(spin)
    return (two_s - 2 * np.arange(two_s + 1)) / 2


def wigner_D(spin, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """``D^S(alpha, beta, gamma) = exp(-i alpha S_z) exp(-i beta S_y) exp(-i gamma S_z)``."""
    m = magnetic_values(spin)
    return np.exp(-1j * alpha * m)[:, None] * wigner_d(spin, beta) * np.exp(-1j * gamma * m)[None, :]


def spin_matrices(spin) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense ``(S_x, S_y, S_z)`` in the descending-``m`` basis."""
    m = magnetic_values(spin)
    S = twice(spin) / 2
    up = np.sqrt(S * (S + 1) - m[1:] * (m[1:] + 1))   # <m+1|S_+|m>
    Sp = np.diag(up, k=1).astype(complex)
    Sm = Sp.conj().T
    return (Sp + Sm) / 2, (Sp - Sm) / 2j, np.diag(m).astype(complex)


# ---------------------------------------------------------------------------
# Clebsch-Gordan

@lru_cache(maxsize=None)
def _cg_twice(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> float:
    """CG coefficient with every argument doubled.

    Racah's sum is rewritten with binomials so that it is an integer
    ``sum_k (-1)^k C(n1, k) C(n2, j1-m1-k) C(n3, j2+m2-k)`` divided by
    ``n1! n2! n3!`` with ``n1 = j1+j2-J``, ``n2 = J+j1-j2``, ``n3 = J-j1+j2``.
    """
    if m1 + m2 != M or abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        return 0.0
    if J > j1 + j2 or J < abs(j1 - j2) or (j1 + j2 + J) % 2:
        return 0.0
    if (j1 + m1) % 2 or (j2 + m2) % 2 or (J + M) % 2:
        return 0.0
    n1, n2, n3 = (j1 + j2 - J) // 2, (J + j1 - j2) // 2, (J - j1 + j2) // 2
    a, b = (j1 - m1) // 2, (j2 + m2) // 2
    total = 0
    for k in range(0, n1 + 1):
        if a - k < 0 or b - k < 0:
            break
        term = math.comb(n1, k) * math.comb(n2, a - k) * math.comb(n3, b - k)
        total += -term if k % 2 else term
    if total == 0:
        return 0.0
    f = math.factorial
    num = ((J + 1) * f((j1 + m1) // 2) * f((j1 - m1) // 2) * f((j2 + m2) // 2) * f((j2 - m2) // 2)
           * f((J + M) // 2) * f((J - M) // 2) * total * total)
    den = f((j1 + j2 + J) // 2 + 1) * f(n1) * f(n2) * f(n3)
    return math.copysign(_sqrt_ratio(num, den), total)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """``<j1 m1; j2 m2 | J M>`` (zero when selection rules fail)."""
    return _cg_twice(twice(j1), twice(m1), twice(j2), twice(m2), twice(J), twice(M))


@lru_cache(maxsize=128)
def coupling_table(two_s: int) -> np.ndarray:
    """``table[I2, r1, r2]`` holding ``<S m1; S m2 | I, m1 + m2>`` for equal spins.

    ``I2 = 2I`` runs over ``0..2*two_s`` with only even ``I2`` populated,
    since two equal spins couple to integer totals.  ``r1, r2`` are
    descending-``m`` indices.
    """
    n = two_s + 1
    table = np.zeros((2 * two_s + 1, n, n))
    for I2 in range(0, 2 * two_s + 1, 2):
        for r1 in range(n):
            m1 = two_s - 2 * r1
            for r2 in range(n):
                m2 = two_s - 2 * r2
                if abs(m1 + m2) <= I2:
                    table[I2, r1, r2] = _cg_twice(two_s, m1, two_s, m2, I2, m1 + m2)
    table.flags.writeable = False
    return table
