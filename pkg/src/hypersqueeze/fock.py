"""Truncated bosonic Fock spaces, ladder operators and sparse operator assembly.

Basis states are occupation tuples ``(n_a, n_b, ...)`` with every occupation
in ``[0, cutoff]``.  They are ordered lexicographically (row-major), so the
vacuum sits at index 0 and the index of a tuple is its mixed-radix value in
base ``cutoff + 1``.

Operators are returned as ``scipy.sparse.csr_matrix`` objects.  Products of
ladder operators are evaluated as products of *truncated* matrices: any
intermediate occupation that leaves ``[0, cutoff]`` kills the term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

MODE_LETTERS = "abcd"
ALLOWED_MODE_COUNTS = (1, 2, 4)


@dataclass(frozen=True)
class FockBasis:
    """Product basis of ``mode_count`` bosonic modes truncated at ``cutoff``."""

    mode_count: int
    cutoff: int

    def __post_init__(self):
        if self.mode_count not in ALLOWED_MODE_COUNTS:
            raise ValueError(f"mode_count must be one of {ALLOWED_MODE_COUNTS}, got {self.mode_count}")
        if int(self.cutoff) != self.cutoff or self.cutoff < 0:
            raise ValueError(f"cutoff must be a non-negative integer, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.mode_count

    @cached_property
    def occupations(self) -> np.ndarray:
        """(dim, mode_count) integer array of occupation tuples in basis order."""
        grids = np.indices((self.cutoff + 1,) * self.mode_count, dtype=np.int64)
        occ = grids.reshape(self.mode_count, -1).T
        occ.flags.writeable = False
        return occ

    @cached_property
    def _radix(self) -> np.ndarray:
        base = self.cutoff + 1
        return base ** np.arange(self.mode_count - 1, -1, -1, dtype=np.int64)

    def index(self, occupation: Sequence[int]) -> int:
        occ = np.asarray(occupation, dtype=np.int64)
        if occ.shape != (self.mode_count,):
            raise ValueError(f"expected {self.mode_count} occupations, got {tuple(occupation)}")
        if occ.min() < 0 or occ.max() > self.cutoff:
            raise IndexError(f"occupation {tuple(occupation)} outside [0, {self.cutoff}]")
        return int(occ @ self._radix)

    def indices(self, occupations: np.ndarray) -> np.ndarray:
        """Vectorised ``index`` for in-range rows of an occupation array."""
        return np.asarray(occupations, dtype=np.int64) @ self._radix

    def occupation(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} outside basis of dimension {self.dim}")
        return tuple(int(n) for n in self.occupations[index])

    def interior(self, margin: int) -> np.ndarray:
        """Indices of states whose occupations are all ``<= cutoff - margin``."""
        return np.flatnonzero(self.occupations.max(axis=1) <= self.cutoff - margin)

    def pair_sector(self) -> np.ndarray:
        """Indices of states with balanced left/right occupation totals.

        For four modes this is ``n_a + n_b == n_c + n_d``; for two modes
        ``n_a == n_b``.  Every pair-creating generator used in this package
        maps the sector into itself, and the squeezed vacua live in it.
        """
        occ = self.occupations
        if self.mode_count == 4:
            mask = occ[:, 0] + occ[:, 1] == occ[:, 2] + occ[:, 3]
        elif self.mode_count == 2:
            mask = occ[:, 0] == occ[:, 1]
        else:
            mask = np.ones(self.dim, dtype=bool)
        return np.flatnonzero(mask)


def build_basis(mode_count: int, cutoff: int) -> FockBasis:
    return FockBasis(mode_count, cutoff)


@dataclass(frozen=True)
class StateVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"amplitude vector of shape {amps.shape} does not match basis dimension {self.basis.dim}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def vacuum(cls, basis: FockBasis) -> "StateVector":
        amps = np.zeros(basis.dim, dtype=complex)
        amps[0] = 1.0
        return cls(basis, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.basis.index(occupation)])

    def inner(self, other: "StateVector") -> complex:
        """``<self|other>``."""
        _check_same_basis(self.basis, other.basis)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _check_same_basis(b1: FockBasis, b2: FockBasis) -> None:
    if b1 != b2:
        raise ValueError(f"basis mismatch: {b1} vs {b2}")


def fidelity(a: StateVector, b: StateVector) -> float:
    """Overlap magnitude ``|<a|b>|`` (no renormalisation)."""
    return abs(a.inner(b))


# ---------------------------------------------------------------------------
# operator assembly

def parse_word(word: str | Iterable[tuple[int, bool]]) -> list[tuple[int, bool]]:
    """Turn ``"Aa"`` style words into ``[(mode, dagger), ...]``.

    Lower-case letters are annihilators and upper-case letters creators, so
    ``"AC"`` is ``a^dag c^dag`` and ``"Aa"`` is the number operator of mode a.
    Already-parsed token lists pass through unchanged.
    """
    if not isinstance(word, str):
        return [(int(m), bool(d)) for m, d in word]
    tokens = []
    for ch in word:
        if ch.isspace():
            continue
        mode = MODE_LETTERS.find(ch.lower())
        if mode < 0:
            raise ValueError(f"unknown mode letter {ch!r} in {word!r}")
        tokens.append((mode, ch.isupper()))
    return tokens


def _support_positions(basis: FockBasis, support: np.ndarray | None):
    if support is None:
        return np.arange(basis.dim), None
    support = np.asarray(support, dtype=np.int64)
    if np.any(np.diff(support) <= 0):
        raise ValueError("support indices must be strictly increasing")
    return support, support


def monomial(basis: FockBasis, word, coeff: complex = 1.0, support: np.ndarray | None = None) -> sp.csr_matrix:
    """Matrix of ``coeff * word`` on ``basis`` (optionally compressed to ``support``).

    The rightmost token acts first.  With a ``support`` the result is the
    compression ``P W P`` onto the listed basis indices, which is exact for
    operators that leave that subspace invariant.
    """
    tokens = parse_word(word)
    cols, support = _support_positions(basis, support)
    occ = np.array(basis.occupations[cols], copy=True)
    amp = np.full(len(cols), complex(coeff))
    alive = np.ones(len(cols), dtype=bool)
    for mode, dagger in reversed(tokens):
        if mode >= basis.mode_count:
            raise ValueError(f"mode {MODE_LETTERS[mode]} not present in a {basis.mode_count}-mode basis")
        n = occ[:, mode]
        if dagger:
            amp *= np.sqrt(n + 1.0)
            n += 1
            alive &= n <= basis.cutoff
        else:
            amp *= np.sqrt(np.maximum(n, 0).astype(float))
            n -= 1
            alive &= n >= 0
    occ_alive = occ[alive]
    src = np.flatnonzero(alive)
    target = basis.indices(occ_alive)
    if support is not None:
        pos = np.searchsorted(support, target)
        pos = np.minimum(pos, len(support) - 1)
        keep = support[pos] == target
        src, pos = src[keep], pos[keep]
        vals = amp[alive][keep]
        size = len(support)
    else:
        pos = target
        vals = amp[alive]
        size = basis.dim
    return sp.csr_matrix((vals, (pos, src)), shape=(size, size))


def polynomial(basis: FockBasis, terms, support: np.ndarray | None = None, constant: complex = 0.0) -> sp.csr_matrix:
    """Sum of ``coeff * word`` monomials plus ``constant * identity``."""
    size = basis.dim if support is None else len(support)
    out = sp.csr_matrix((size, size), dtype=complex)
    for coeff, word in terms:
        out = out + monomial(basis, word, coeff, support)
    if constant:
        out = out + constant * sp.identity(size, dtype=complex, format="csr")
    out.sum_duplicates()
    out.eliminate_zeros()
    return out.tocsr()


@dataclass(frozen=True)
class LadderSet:
    annihilators: list
    creators: list
    numbers: list


def ladder_operators(basis: FockBasis, support: np.ndarray | None = None) -> LadderSet:
    """Annihilation, creation and number operators for every mode.

    ``creators[i]`` is exactly the adjoint of ``annihilators[i]``; on the top
    occupation the creation operator is zero, so ``[a, a^dag]`` has ``-cutoff``
    on that diagonal entry instead of 1.
    """
    ann, cre, num = [], [], []
    for m in range(basis.mode_count):
        letter = MODE_LETTERS[m]
        ann.append(monomial(basis, letter, support=support))
        cre.append(monomial(basis, letter.upper(), support=support))
        num.append(monomial(basis, letter.upper() + letter, support=support))
    return LadderSet(ann, cre, num)


# ---------------------------------------------------------------------------
# matrix exponential action

DENSE_LIMIT = 256


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def expm_action(A, v: np.ndarray, tol: float = 1e-10, dense_limit: int = DENSE_LIMIT,
                step_norm: float = 4.0, max_terms: int = 80) -> np.ndarray:
    """Return ``exp(A) @ v``.

    Small problems use dense scaling-and-squaring.  Larger ones use a
    truncated Taylor series applied in ``s`` sub-steps with ``||A||_1 / s``
    below ``step_norm``; each sub-step adds terms until the last two fall
    under ``tol / s`` relative to the running vector.
    """
    shape = A.shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"operator must be square, got shape {shape}")
    v = np.asarray(v, dtype=complex)
    if v.shape != (shape[0],):
        raise ValueError(f"vector of length {v.shape} does not match operator dimension {shape[0]}")
    if shape[0] <= dense_limit:
        import scipy.linalg

        dense = A.toarray() if sp.issparse(A) else np.asarray(A)
        return scipy.linalg.expm(dense.astype(complex)) @ v

    A = sp.csr_matrix(A, dtype=complex)
    norm1 = float(abs(A).sum(axis=0).max()) if A.nnz else 0.0
    steps = max(1, math.ceil(norm1 / step_norm))
    step_tol = tol / steps
    w = v.copy()
    for _ in range(steps):
        term = w.copy()
        acc = w.copy()
        prev = np.inf
        for k in range(1, max_terms + 1):
            term = (A @ term) / (steps * k)
            acc += term
            size = np.linalg.norm(term)
            scale = max(np.linalg.norm(acc), 1e-300)
            if size + prev <= step_tol * scale:
                break
            prev = size
        else:
            raise ConvergenceError("truncated Taylor series did not converge", (size + prev) / scale)
        w = acc
    return w


def exp_action(op, state: StateVector, tol: float = 1e-10) -> StateVector:
    """``exp(op) |state>`` for a sparse operator on the state's basis."""
    shape = op.shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"operator must be square, got shape {shape}")
    if shape[0] != state.basis.dim:
        raise ValueError(f"operator dimension {shape[0]} does not match basis dimension {state.basis.dim}")
    return StateVector(state.basis, expm_action(op, state.amplitudes, tol))


# ---------------------------------------------------------------------------
# truncation budget

def sector_tail(rho: float, top: int) -> float:
    """Weight of all spin sectors with ``2S > top`` in the four-mode vacuum.

    Summing ``(k + 1) x**k`` from ``k = top + 1`` with ``x = tanh(rho/2)**2``
    and multiplying by ``(1 - x)**2`` gives ``x**(top+1) * (top + 2 - (top + 1) x)``.
    """
    x = math.tanh(rho / 2) ** 2
    return x ** (top + 1) * (top + 2 - (top + 1) * x)


def required_cutoff(rho: float, eps: float) -> int:
    """Smallest per-mode cutoff whose neglected spin-sector weight is ``<= eps``."""
    if not (eps > 0 and eps < 1):
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    if rho < 0 or not math.isfinite(rho):
        raise ValueError(f"rho must be finite and non-negative, got {rho}")
    if rho == 0:
        return 0
    n = 0
    while sector_tail(rho, n) > eps:
        n += 1
        if n > 100_000:
            raise ValueError(f"no cutoff below 100000 reaches epsilon={eps} at rho={rho}")
    return n


@dataclass(frozen=True)
class TruncationBudget:
    rho: float
    epsilon: float
    cutoff: int = field(init=False)
    tail: float = field(init=False)

    def __post_init__(self):
        n = required_cutoff(self.rho, self.epsilon)
        object.__setattr__(self, "cutoff", n)
        object.__setattr__(self, "tail", sector_tail(self.rho, n) if self.rho > 0 else 0.0)

    def dimension(self, mode_count: int = 4) -> int:
        return (self.cutoff + 1) ** mode_count
