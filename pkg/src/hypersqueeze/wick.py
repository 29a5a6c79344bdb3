"""Vacuum expectation values of squeezed states by Wick contraction.

A squeeze operator ``S`` acts on the spinor of ladder operators linearly,
``S^dag psi S = M psi``.  So ``<0|S^dag O(psi) S|0> = <0|O(M psi)|0>`` and any
moment is a finite sum of vacuum expectation values of ladder words, each
evaluated by commuting annihilators to the right.

Spinor layouts: a 4x4 ``M`` acts on ``(a, b, c^dag, d^dag)`` and a 2x2 ``M``
on ``(a, b^dag)``.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .fock import parse_word

# for each spinor size: which modes sit in the slots as creators
_CREATOR_SLOTS = {4: (False, False, True, True), 2: (False, True)}


def _slot_form(mode: int, dagger: bool, size: int) -> tuple[int, bool]:
    """Map a ladder token to ``(slot, conjugated)`` with ``psi_slot`` or ``psi_slot^dag``."""
    flags = _CREATOR_SLOTS[size]
    if mode >= size:
        raise ValueError(f"mode index {mode} not in a {size}-component spinor")
    return mode, dagger != flags[mode]


def _ladder_form(slot: int, conjugated: bool, size: int) -> tuple[int, bool]:
    return slot, conjugated != _CREATOR_SLOTS[size][slot]


@lru_cache(maxsize=None)
def vacuum_expectation(word: tuple[tuple[int, bool], ...]) -> int:
    """``<0|word|0>`` for a product of ladder operators (integer valued)."""
    if not word:
        return 1
    mode, dagger = word[0]
    if dagger:
        return 0
    rest = word[1:]
    total = 0
    for j, (m, d) in enumerate(rest):
        if d and m == mode:
            total += vacuum_expectation(rest[:j] + rest[j + 1:])
    return total


def wick_expectation(M: np.ndarray, word) -> complex:
    """``<O>`` in the squeezed vacuum ``S|0>`` with ``S^dag psi S = M psi``."""
    M = np.asarray(M, dtype=complex)
    size = M.shape[0]
    if M.shape != (size, size) or size not in _CREATOR_SLOTS:
        raise ValueError(f"expected a 2x2 or 4x4 coset matrix, got shape {M.shape}")
    tokens = parse_word(word)
    factors = []
    for mode, dagger in tokens:
        slot, conj = _slot_form(mode, dagger, size)
        row = M[slot].conj() if conj else M[slot]
        factors.append([(row[b], _ladder_form(b, conj, size)) for b in range(size) if row[b] != 0])
    total = 0j
    for combo in itertools.product(*factors):
        coeff = 1 + 0j
        for c, _ in combo:
            coeff *= c
        val = vacuum_expectation(tuple(t for _, t in combo))
        if val:
            total += coeff * val
    return complex(total)


def wick_polynomial(M: np.ndarray, terms) -> complex:
    """Expectation of ``sum coeff * word``."""
    return sum((complex(c) * wick_expectation(M, w) for c, w in terms), 0j)


def square_linear(form) -> list:
    """Expand ``(sum_i c_i w_i)**2`` for single-token words into monomials."""
    return [(c1 * c2, w1 + w2) for c1, w1 in form for c2, w2 in form]
