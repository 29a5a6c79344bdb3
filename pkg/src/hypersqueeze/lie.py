"""4x4 gamma-matrix families for so(4,1) and their bosonic realisation.

Indices follow the physics labelling: vector indices ``1..5`` with metric
``diag(-1, -1, -1, -1, +1)`` and an extra index 6 (metric ``+1``) for the
conformal extension.  All 4x4 entries lie in ``{0, +-1, +-i, +-1/2, +-i/2}``,
which are exact in binary floating point, so the matrix identities below hold
with zero residual.

The bosonic generators act on four modes ``a, b, c, d`` arranged in the
spinor ``(a, b, c^dag, d^dag)``; its components obey ``[psi_i, psi_j^dag] = k_ij``
with ``k = diag(1, 1, -1, -1)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import FockBasis, polynomial

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
I2 = np.eye(2, dtype=complex)

ETA5 = np.diag([-1.0, -1.0, -1.0, -1.0, 1.0])
ETA6 = np.diag([-1.0, -1.0, -1.0, -1.0, 1.0, 1.0])
K = np.diag([1, 1, -1, -1]).astype(complex)

# quaternion-like 2x2 blocks q^m and their conjugates, m = 1..4
Q = (-1j * SIGMA[0], -1j * SIGMA[1], -1j * SIGMA[2], I2)
QBAR = (1j * SIGMA[0], 1j * SIGMA[1], 1j * SIGMA[2], I2)

PAIRS5 = [(a, b) for a in range(1, 6) for b in range(a + 1, 6)]
PAIRS6 = [(a, b) for a in range(1, 7) for b in range(a + 1, 7)]


def _block(tl, tr, bl, br) -> np.ndarray:
    return np.block([[tl, tr], [bl, br]])


def gamma(a: int) -> np.ndarray:
    """Gamma matrix ``gamma^a`` for ``a`` in 1..5."""
    if a == 5:
        return K.copy()
    z = np.zeros((2, 2), dtype=complex)
    return _block(z, -QBAR[a - 1], Q[a - 1], z)


def sigma(a: int, b: int) -> np.ndarray:
    """``Sigma^{ab} = -(i/4) [gamma^a, gamma^b]``."""
    ga, gb = gamma(a), gamma(b)
    return -0.25j * (ga @ gb - gb @ ga)


def k_vector(a: int) -> np.ndarray:
    return K @ gamma(a)


def k_tensor(a: int, b: int) -> np.ndarray:
    return K @ sigma(a, b)


def levi_civita4(i: int, j: int, k: int, l: int) -> int:
    perm = (i, j, k, l)
    if len(set(perm)) < 4:
        return 0
    sign = 1
    p = list(perm)
    for x in range(4):
        for y in range(x + 1, 4):
            if p[x] > p[y]:
                sign = -sign
    return sign


def thooft(i: int, m: int, n: int, anti: bool = False) -> int:
    """'t Hooft symbol with ``i`` in 1..3 and ``m, n`` in 1..4 (epsilon^{1234} = 1)."""
    s = -1 if anti else 1
    return levi_civita4(m, n, i, 4) + s * ((m == i) * (n == 4) - (m == 4) * (n == i))


def sigma_thooft(m: int, n: int) -> np.ndarray:
    """Block-diagonal form of ``Sigma^{mn}`` built from 't Hooft symbols."""
    upper = sum(thooft(i, m, n) * SIGMA[i - 1] for i in (1, 2, 3))
    lower = sum(thooft(i, m, n, anti=True) * SIGMA[i - 1] for i in (1, 2, 3))
    z = np.zeros((2, 2), dtype=complex)
    return -0.5 * _block(upper + z, z, z, lower + z)


CHARGE_CONJUGATION = np.array(
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=complex
)


@dataclass
class IdentityCheck:
    name: str
    residual: float

    @property
    def passed(self) -> bool:
        return self.residual == 0.0


def matrix_family_checks() -> list[IdentityCheck]:
    """Exact identities of the gamma, Sigma and k families.

    Every residual is a max-abs entry difference and should be exactly zero.
    """
    out = []

    def add(name, diff):
        out.append(IdentityCheck(name, float(np.max(np.abs(diff))) if np.size(diff) else 0.0))

    g = {a: gamma(a) for a in range(1, 6)}
    clifford = max(
        np.max(np.abs(g[a] @ g[b] + g[b] @ g[a] - 2 * ETA5[a - 1, b - 1] * np.eye(4)))
        for a in range(1, 6) for b in range(1, 6)
    )
    add("clifford", clifford)

    s = {ab: sigma(*ab) for ab in PAIRS5}
    add("sigma_thooft", max(np.max(np.abs(s[(m, n)] - sigma_thooft(m, n)))
                            for m in range(1, 5) for n in range(m + 1, 5)))
    # explicit m5 block form
    z = np.zeros((2, 2), dtype=complex)
    add("sigma_m5_blocks", max(np.max(np.abs(s[(m, 5)] - (-0.5j) * _block(z, QBAR[m - 1], Q[m - 1], z)))
                               for m in range(1, 5)))
    add("sigma_so41_algebra", so_algebra_residual(
        {ab: (lambda ab=ab: s[ab]) for ab in PAIRS5}, ETA5, lambda x, y: x @ y - y @ x))
    add("pseudo_anti_hermitian", max(np.max(np.abs((1j * s[ab]).conj().T @ K + K @ (1j * s[ab])))
                                     for ab in PAIRS5))
    add("k_squared", K @ K - np.eye(4))
    add("k_vector_hermitian", max(np.max(np.abs(k_vector(a) - k_vector(a).conj().T)) for a in range(1, 6)))
    add("k_tensor_hermitian", max(np.max(np.abs(k_tensor(*ab) - k_tensor(*ab).conj().T)) for ab in PAIRS5))
    add("k5_identity", k_vector(5) - np.eye(4))
    C = CHARGE_CONJUGATION
    Ci = np.linalg.inv(C)
    add("charge_conjugation_gamma", max(np.max(np.abs(g[a].conj() - C @ g[a] @ Ci)) for a in range(1, 6)))
    add("charge_conjugation_sigma", max(np.max(np.abs(s[ab].conj() + C @ s[ab] @ Ci)) for ab in PAIRS5))
    return out


def k_family_breaks_algebra() -> dict[str, float]:
    """How far the bare ``k^a`` / ``k^{ab}`` matrices are from closing.

    The matrices themselves do *not* satisfy the Clifford or so(4,1)
    relations; only their bosonic sandwiches do.  Both numbers are positive.
    """
    kv = {a: k_vector(a) for a in range(1, 6)}
    clifford = max(
        np.max(np.abs(kv[a] @ kv[b] + kv[b] @ kv[a] - 2 * ETA5[a - 1, b - 1] * np.eye(4)))
        for a in range(1, 6) for b in range(1, 6)
    )
    kt = {ab: k_tensor(*ab) for ab in PAIRS5}
    algebra = so_algebra_residual({ab: (lambda ab=ab: kt[ab]) for ab in PAIRS5}, ETA5,
                                  lambda x, y: x @ y - y @ x)
    return {"clifford": float(clifford), "so41": float(algebra)}


def _generator(table, A, B):
    if A == B:
        return None
    if A < B:
        return table[(A, B)]()
    return -table[(B, A)]()


def commutator_residuals(table, eta, commutator, pairs=None, restrict=None):
    """Yield ``((A, B), (C, D), residual)`` for
    ``[X^{AB}, X^{CD}] = i(eta^{AC}X^{BD} - eta^{AD}X^{BC} + eta^{BD}X^{AC} - eta^{BC}X^{AD})``.

    ``table`` maps ``(A, B)`` with ``A < B`` to zero-argument callables.
    ``restrict`` optionally maps a matrix to the block that is compared.
    """
    if pairs is None:
        pairs = sorted(table)
    for (A, B), (C, D) in itertools.product(pairs, repeat=2):
        lhs = commutator(table[(A, B)](), table[(C, D)]())
        rhs = None
        for coeff, (P, R) in ((eta[A - 1, C - 1], (B, D)), (-eta[A - 1, D - 1], (B, C)),
                              (eta[B - 1, D - 1], (A, C)), (-eta[B - 1, C - 1], (A, D))):
            if coeff == 0 or P == R:
                continue
            term = 1j * coeff * _generator(table, P, R)
            rhs = term if rhs is None else rhs + term
        diff = lhs if rhs is None else lhs - rhs
        if restrict is not None:
            diff = restrict(diff)
        if sp.issparse(diff):
            val = abs(diff).max() if diff.nnz else 0.0
        else:
            val = np.max(np.abs(diff)) if np.size(diff) else 0.0
        yield (A, B), (C, D), float(val)


def so_algebra_residual(table, eta, commutator, pairs=None, restrict=None) -> float:
    """Max residual over all pairs, see ``commutator_residuals``."""
    return max((r for _, _, r in commutator_residuals(table, eta, commutator, pairs, restrict)),
               default=0.0)


# ---------------------------------------------------------------------------
# bosonic realisation

# normal-ordered polynomials: (coefficient, word) with upper case = creation
VECTOR_TERMS = {
    1: [(-1j, "AD"), (-1j, "BC"), (1j, "ad"), (1j, "bc")],
    2: [(-1, "AD"), (1, "BC"), (-1, "ad"), (1, "bc")],
    3: [(-1j, "AC"), (1j, "BD"), (1j, "ac"), (-1j, "bd")],
    4: [(-1, "AC"), (-1, "BD"), (-1, "ac"), (-1, "bd")],
    5: [(1, "Aa"), (1, "Bb"), (1, "Cc"), (1, "Dd")],
}
VECTOR_CONSTANT = {5: 2.0}

TENSOR_TERMS = {
    (1, 2): [(-0.5, "Aa"), (0.5, "Bb"), (0.5, "Cc"), (-0.5, "Dd")],
    (1, 3): [(-0.5j, "Ab"), (0.5j, "Ba"), (-0.5j, "Cd"), (0.5j, "Dc")],
    (1, 4): [(-0.5, "Ab"), (-0.5, "Ba"), (-0.5, "Cd"), (-0.5, "Dc")],
    # (2,3) and (2,4) carry the signs of psi^dag k^{ab} psi; the opposite
    # signs break closure of the algebra
    (2, 3): [(-0.5, "Ab"), (-0.5, "Ba"), (0.5, "Cd"), (0.5, "Dc")],
    (2, 4): [(0.5j, "Ab"), (-0.5j, "Ba"), (-0.5j, "Cd"), (0.5j, "Dc")],
    (3, 4): [(-0.5, "Aa"), (0.5, "Bb"), (-0.5, "Cc"), (0.5, "Dd")],
    (1, 5): [(0.5, "AD"), (0.5, "BC"), (0.5, "ad"), (0.5, "bc")],
    (2, 5): [(-0.5j, "AD"), (0.5j, "BC"), (0.5j, "ad"), (-0.5j, "bc")],
    (3, 5): [(0.5, "AC"), (-0.5, "BD"), (0.5, "ac"), (-0.5, "bd")],
    (4, 5): [(-0.5j, "AC"), (-0.5j, "BD"), (0.5j, "ac"), (0.5j, "bd")],
}

# spin doublets (a, b) and (c, d); pseudo-spin doublets (a, c^dag) and (b, d^dag)
SPIN_TERMS = {
    "L": ([(0.5, "Ab"), (0.5, "Ba")], [(-0.5j, "Ab"), (0.5j, "Ba")], [(0.5, "Aa"), (-0.5, "Bb")]),
    "R": ([(0.5, "Cd"), (0.5, "Dc")], [(-0.5j, "Cd"), (0.5j, "Dc")], [(0.5, "Cc"), (-0.5, "Dd")]),
    "T": ([(0.5j, "AC"), (-0.5j, "ac")], [(0.5, "AC"), (0.5, "ac")], [(0.5, "Aa"), (0.5, "Cc")]),
    "B": ([(0.5j, "BD"), (-0.5j, "bd")], [(0.5, "BD"), (0.5, "bd")], [(0.5, "Bb"), (0.5, "Dd")]),
}
SPIN_CONSTANT = {"T": 0.5, "B": 0.5}


@dataclass
class GeneratorBundle:
    """so(4,2) generators plus spin and pseudo-spin operators on one basis.

    ``X_a[a]`` for ``a`` in 1..5, ``X_ab[(a, b)]`` for ``a < b`` in 1..5,
    and ``L``, ``R``, ``T``, ``B`` as ``[x, y, z]`` lists.
    """

    basis: FockBasis
    support: np.ndarray | None
    X_a: dict
    X_ab: dict
    L: list
    R: list
    T: list
    B: list

    @property
    def dim(self) -> int:
        return self.basis.dim if self.support is None else len(self.support)

    def X(self, A: int, B: int):
        """Conformal generator ``X^{AB}`` for ``A, B`` in 1..6 (``X^{a6} = -X^a / 2``)."""
        if A == B:
            raise ValueError("X^{AA} is not a generator")
        if A > B:
            return -self.X(B, A)
        if B == 6:
            return -0.5 * self.X_a[A]
        return self.X_ab[(A, B)]

    def lower(self, a: int, b: int):
        """``X_{ab} = eta_aa eta_bb X^{ab}``."""
        return ETA5[a - 1, a - 1] * ETA5[b - 1, b - 1] * self.X_ab[(a, b)]

    def total_spin_left(self):
        return polynomial(self.basis, [(0.5, "Aa"), (0.5, "Bb")], self.support)

    def total_spin_right(self):
        return polynomial(self.basis, [(0.5, "Cc"), (0.5, "Dd")], self.support)


def build_generators(basis: FockBasis, support: np.ndarray | None = None) -> GeneratorBundle:
    if basis.mode_count != 4:
        raise ValueError(f"the so(4,2) generators need a 4-mode basis, got {basis.mode_count} modes")
    X_a = {a: polynomial(basis, terms, support, VECTOR_CONSTANT.get(a, 0.0)) for a, terms in VECTOR_TERMS.items()}
    X_ab = {ab: polynomial(basis, terms, support) for ab, terms in TENSOR_TERMS.items()}
    spins = {
        name: [polynomial(basis, comp, support, SPIN_CONSTANT.get(name, 0.0) if i == 2 else 0.0)
               for i, comp in enumerate(comps)]
        for name, comps in SPIN_TERMS.items()
    }
    return GeneratorBundle(basis, support, X_a, X_ab, spins["L"], spins["R"], spins["T"], spins["B"])


def sandwich(basis: FockBasis, matrix: np.ndarray, support: np.ndarray | None = None) -> sp.csr_matrix:
    """Normal-ordered ``psi^dag M psi`` with ``psi = (a, b, c^dag, d^dag)``.

    Terms ``c d^dag`` style are reordered as ``d^dag c`` plus the commutator,
    which contributes ``M_33 + M_44`` times the identity.
    """
    psi = ["a", "b", "C", "D"]          # words of psi_i
    psi_dag = ["A", "B", "c", "d"]      # words of psi_i^dag
    terms = []
    constant = 0.0
    for i in range(4):
        for j in range(4):
            m = complex(matrix[i, j])
            if m == 0:
                continue
            left, right = psi_dag[i], psi[j]
            if left.islower() and right.isupper():
                # c d^dag -> d^dag c + delta
                terms.append((m, right + left))
                if left.upper() == right:
                    constant += m
            else:
                terms.append((m, left + right))
    return polynomial(basis, terms, support, constant)


def sandwich_cross_check(bundle: GeneratorBundle) -> float:
    """Max deviation between the printed generators and ``psi^dag k^{..} psi``."""
    worst = 0.0
    for a in range(1, 6):
        diff = bundle.X_a[a] - sandwich(bundle.basis, k_vector(a), bundle.support)
        worst = max(worst, abs(diff).max() if diff.nnz else 0.0)
    for ab in PAIRS5:
        diff = bundle.X_ab[ab] - sandwich(bundle.basis, k_tensor(*ab), bundle.support)
        worst = max(worst, abs(diff).max() if diff.nnz else 0.0)
    return float(worst)


# ---------------------------------------------------------------------------
# operator-level verification

ALGEBRA_TOLERANCE = 1e-12


@dataclass
class AlgebraReport:
    cutoff: int
    margin: int
    interior_dim: int
    residuals: dict          # ((A, B), (C, D)) -> max interior residual

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def worst_pair(self):
        return max(self.residuals, key=self.residuals.get)

    @property
    def passed(self) -> bool:
        return self.max_residual <= ALGEBRA_TOLERANCE


def _interior_columns(bundle: GeneratorBundle, margin: int) -> np.ndarray:
    if bundle.support is not None:
        raise ValueError("interior checks need a bundle built on the full basis")
    if margin < 2:
        raise ValueError(f"interior margin must be >= 2, got {margin}")
    inner = bundle.basis.interior(margin)
    if inner.size == 0:
        raise ValueError(f"margin {margin} leaves no interior states at cutoff {bundle.basis.cutoff}")
    return inner


def verify_so42_algebra(bundle: GeneratorBundle, margin: int = 2, pairs=None) -> AlgebraReport:
    """Commutators of all so(4,2) generators applied to interior states.

    Columns (input states) are restricted to occupations ``<= cutoff - margin``;
    a product of two quadratic generators never leaves the truncated space
    from there, so the comparison is exact up to roundoff.
    """
    inner = _interior_columns(bundle, margin)
    table = {p: (lambda p=p: bundle.X(*p)) for p in PAIRS6}
    residuals = {
        (ab, cd): r
        for ab, cd, r in commutator_residuals(table, ETA6, lambda x, y: x @ y - y @ x,
                                              pairs, restrict=lambda m: m[:, inner])
    }
    return AlgebraReport(bundle.basis.cutoff, margin, int(inner.size), residuals)


def casimir_su22(bundle: GeneratorBundle):
    """``X^a X_a + 4 sum_{a<b} X^{ab} X_{ab}``."""
    out = sum(ETA5[a - 1, a - 1] * (bundle.X_a[a] @ bundle.X_a[a]) for a in range(1, 6))
    return out + 4 * sum(bundle.lower(*ab) @ bundle.X_ab[ab] for ab in PAIRS5)


def casimir_expected(occupations: np.ndarray) -> np.ndarray:
    """``3 (N_L - N_R - 2)(N_L - N_R + 2)`` per basis state."""
    occ = np.asarray(occupations)
    d = occ[..., 0] + occ[..., 1] - occ[..., 2] - occ[..., 3]
    return 3 * (d - 2) * (d + 2)


@dataclass
class CasimirReport:
    off_diagonal: float      # largest off-diagonal magnitude on interior columns
    eigenvalue: float        # largest deviation of the diagonal from the formula
    vacuum: float

    @property
    def passed(self) -> bool:
        return max(self.off_diagonal, self.eigenvalue) <= ALGEBRA_TOLERANCE and self.vacuum == -12.0


def verify_casimir(bundle: GeneratorBundle, margin: int = 2) -> CasimirReport:
    inner = _interior_columns(bundle, margin)
    C = casimir_su22(bundle).tocsc()[:, inner].tocoo()
    expected = casimir_expected(bundle.basis.occupations[inner])
    on_diag = C.row == inner[C.col]
    off = float(np.max(np.abs(C.data[~on_diag]), initial=0.0))
    diag = np.zeros(inner.size, dtype=complex)
    np.add.at(diag, C.col[on_diag], C.data[on_diag])
    vac = complex(casimir_su22(bundle)[0, 0])
    return CasimirReport(off, float(np.max(np.abs(diag - expected))), float(vac.real))
