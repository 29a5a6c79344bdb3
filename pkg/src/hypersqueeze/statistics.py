"""Spin, particle-number, entanglement and quadrature statistics.

Every moment is available from three independent routes that share no code
beyond the parameter conventions:

* ``closed_form_moments``: analytic expressions in ``rho, chi, theta``;
* ``wick_moments``: Wick contraction through the coset matrix;
* ``state_moments``: sums over the amplitudes of a numeric state.

Spin magnitudes follow the Schwinger convention ``L = (n_a + n_b)/2`` and
``R = (n_c + n_d)/2``; ``<L R>`` is the product of the magnitudes, not the
dot product of the spin vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .coset import SqueezeParams, coset_matrix, su11_coset
from .fock import FockBasis, StateVector, monomial
from .wick import square_linear, wick_expectation, wick_polynomial
from .wigner import wigner_D

MODES = "abcd"
NUMBER_PAIRS = [p for p in combinations(MODES, 2)]
LADDER_WORDS = {
    "<a a+>": "aA", "<a+ a>": "Aa", "<c c+>": "cC", "<c+ c>": "Cc",
    "<a c>": "ac", "<b d>": "bd", "<a d>": "ad", "<b c>": "bc",
    "<a^2>": "aa", "<c^2>": "cc", "<a c+>": "aC",
}
INV_SQRT8 = 1 / math.sqrt(8)


# ---------------------------------------------------------------------------
# spin-sector distribution

def total_spin_probability(rho: float, two_s: int) -> float:
    """``P_S = (2S + 1) cosh(rho/2)**-4 tanh(rho/2)**(4S)``."""
    t2 = math.tanh(rho / 2) ** 2
    return (two_s + 1) * t2 ** two_s / math.cosh(rho / 2) ** 4


def spin_sector_probabilities(params: SqueezeParams, two_s: int) -> np.ndarray:
    """``P[L_z, R_z]`` within sector ``2S`` (descending magnetic indices)."""
    rho, chi, theta, phi = params.as_tuple()
    spin = two_s / 2
    D = wigner_D(spin, phi, theta, -chi) @ wigner_D(spin, -chi, -theta, -phi)
    t2 = math.tanh(rho / 2) ** 2
    return t2 ** two_s / math.cosh(rho / 2) ** 4 * np.abs(D) ** 2


@dataclass
class SpinSectorDistribution:
    rho: float
    totals: np.ndarray          # P_S indexed by 2S
    tail: float                 # weight beyond the last listed sector

    @property
    def argmax_two_s(self) -> int:
        return int(np.argmax(self.totals))


def spin_sector_distribution(rho: float, max_two_s: int) -> SpinSectorDistribution:
    totals = np.array([total_spin_probability(rho, k) for k in range(max_two_s + 1)])
    return SpinSectorDistribution(rho, totals, max(0.0, 1.0 - float(totals.sum())))


def argmax_two_s(rho: float) -> int:
    """Most probable ``2S``; ``(k + 1) x**k`` is unimodal in ``k``."""
    if rho == 0:
        return 0
    x = math.tanh(rho / 2) ** 2
    k = 0
    while (k + 2) * x > (k + 1):
        k += 1
    return k


# ---------------------------------------------------------------------------
# moment reports

@dataclass
class MomentReport:
    route: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def max_discrepancy(self, other: "MomentReport", keys=None) -> tuple[float, str]:
        keys = sorted(set(self.values) & set(other.values)) if keys is None else keys
        worst, where = 0.0, ""
        for k in keys:
            d = abs(complex(self.values[k]) - complex(other.values[k]))
            if d > worst or not where:
                worst, where = d, k
        return worst, where


def _derived(values: dict) -> None:
    """Fill covariances, variances and correlation coefficients from raw moments."""
    for m in MODES:
        values[f"var(n_{m})"] = values[f"<n_{m}^2>"] - values[f"<n_{m}>"] ** 2
    for x, y in NUMBER_PAIRS:
        cov = values[f"<n_{x} n_{y}>"] - values[f"<n_{x}>"] * values[f"<n_{y}>"]
        values[f"cov(n_{x},n_{y})"] = cov
        values[f"J(n_{x},n_{y})"] = _ratio(cov, math.sqrt(values[f"var(n_{x})"] * values[f"var(n_{y})"]))
    for s in "LR":
        values[f"var({s})"] = values[f"<{s}^2>"] - values[f"<{s}>"] ** 2
    cov = values["<L R>"] - values["<L>"] * values["<R>"]
    values["cov(L,R)"] = cov
    values["J(L,R)"] = _ratio(cov, math.sqrt(values["var(L)"] * values["var(R)"]))
    values["<S>"] = values["<L>"]
    values["<S^2>"] = values["<L^2>"]
    values["var(S)"] = values["var(L)"]
    values["fluct(S)"] = _ratio(math.sqrt(values["var(S)"]), values["<S>"])
    for q in ("X1", "X2", "X3", "X4"):
        if f"<{q}^2>" in values:
            values[f"var({q})"] = values[f"<{q}^2>"] - values[f"<{q}>"] ** 2
    if "var(X1)" in values:
        values["var(X1)var(X2)"] = values["var(X1)"] * values["var(X2)"]
        values["var(X3)var(X4)"] = values["var(X3)"] * values["var(X4)"]


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else float("nan")


def closed_form_moments(params: SqueezeParams) -> MomentReport:
    """Analytic moments of the squeezed vacuum."""
    rho, chi, theta, phi = params.as_tuple()
    s2 = math.sinh(rho / 2) ** 2
    c2 = math.cosh(rho / 2) ** 2
    sh = math.sinh(rho)
    sh2 = sh ** 2
    ch = math.cosh(rho)
    g = (math.sin(chi) * math.sin(theta)) ** 2
    cc, sc, ct = math.cos(chi), math.sin(chi), math.cos(theta)
    v = {}
    for m in MODES:
        v[f"<n_{m}>"] = s2
        v[f"<n_{m}^2>"] = 2 * s2 ** 2 + s2
    same_side = s2 ** 2
    direct = 0.25 * sh2 * (1 - g) + s2 ** 2
    crossed = 0.25 * sh2 * g + s2 ** 2
    v.update({"<n_a n_b>": same_side, "<n_c n_d>": same_side,
              "<n_a n_c>": direct, "<n_b n_d>": direct,
              "<n_a n_d>": crossed, "<n_b n_c>": crossed})
    spin_sq = 1.5 * s2 ** 2 + 0.5 * s2
    v.update({"<L>": s2, "<R>": s2, "<L_z>": 0.0, "<R_z>": 0.0,
              "<L^2>": spin_sq, "<R^2>": spin_sq,
              # L = R on every basis state carried by the vacuum
              "<L R>": spin_sq})
    v.update({
        "<a a+>": c2, "<a+ a>": s2, "<c c+>": c2, "<c+ c>": s2,
        "<a c>": -0.5 * sh * (cc + 1j * sc * ct),
        "<b d>": -0.5 * sh * (cc - 1j * sc * ct),
        "<a d>": -0.5j * sh * sc * math.sin(theta) * np.exp(-1j * phi),
        "<b c>": -0.5j * sh * sc * math.sin(theta) * np.exp(1j * phi),
        "<a^2>": 0.0, "<c^2>": 0.0, "<a c+>": 0.0,
    })
    minus, plus = 0.25 * (ch - sh * cc), 0.25 * (ch + sh * cc)
    for q, val in (("X1", minus), ("X2", plus), ("X3", minus), ("X4", plus)):
        v[f"<{q}>"] = 0.0
        v[f"<{q}^2>"] = val
    rot = cc ** 2 + sc ** 2 * ct
    v["var(X1')"] = v["var(X3')"] = 0.25 * (ch - sh * rot)
    v["var(X2')"] = v["var(X4')"] = 0.25 * (ch + sh * rot)
    for q in ("Y1", "Y2", "Y3", "Y4"):
        v[f"var({q})"] = 0.25 * ch
    _derived(v)
    return MomentReport("closed", v)


# quadrature linear forms: (coefficient, single-letter word)
def _quadrature_forms() -> dict:
    def pos(x, y):
        return [(INV_SQRT8, x), (INV_SQRT8, x.upper()), (INV_SQRT8, y), (INV_SQRT8, y.upper())]

    def mom(x, y):
        k = -1j * INV_SQRT8
        return [(k, x), (-k, x.upper()), (k, y), (-k, y.upper())]

    return {"X1": pos("a", "c"), "X2": mom("a", "c"), "X3": pos("b", "d"), "X4": mom("b", "d"),
            "Y1": pos("a", "b"), "Y2": mom("a", "b"), "Y3": pos("c", "d"), "Y4": mom("c", "d")}


def rotated_forms(chi: float) -> dict:
    """Quadratures rotated by ``chi/2`` so that the theta = 0 state is minimal.

    ``X1' = cos X1 + sin X2, X2' = -sin X1 + cos X2`` and
    ``X3' = cos X3 - sin X4, X4' = sin X3 + cos X4`` with half-angle ``chi/2``.
    """
    f = _quadrature_forms()
    c, s = math.cos(chi / 2), math.sin(chi / 2)

    def comb(p, u, q, w):
        return [(p * k, x) for k, x in u] + [(q * k, x) for k, x in w]

    return {"X1'": comb(c, f["X1"], s, f["X2"]), "X2'": comb(-s, f["X1"], c, f["X2"]),
            "X3'": comb(c, f["X3"], -s, f["X4"]), "X4'": comb(s, f["X3"], c, f["X4"])}


def wick_moments(params: SqueezeParams) -> MomentReport:
    """Moments by Wick contraction through the coset matrix."""
    M = coset_matrix(params)

    def ev(word):
        return wick_expectation(M, word)

    v = {}
    for m in MODES:
        n = m.upper() + m
        v[f"<n_{m}>"] = ev(n).real
        v[f"<n_{m}^2>"] = ev(n + n).real
    for x, y in NUMBER_PAIRS:
        v[f"<n_{x} n_{y}>"] = ev(x.upper() + x + y.upper() + y).real
    half = [(0.5, "Aa"), (0.5, "Bb")]
    right = [(0.5, "Cc"), (0.5, "Dd")]
    v["<L>"] = wick_polynomial(M, half).real
    v["<R>"] = wick_polynomial(M, right).real
    v["<L_z>"] = wick_polynomial(M, [(0.5, "Aa"), (-0.5, "Bb")]).real
    v["<R_z>"] = wick_polynomial(M, [(0.5, "Cc"), (-0.5, "Dd")]).real
    prod = lambda u, w: [(c1 * c2, w1 + w2) for c1, w1 in u for c2, w2 in w]  # noqa: E731
    v["<L^2>"] = wick_polynomial(M, prod(half, half)).real
    v["<R^2>"] = wick_polynomial(M, prod(right, right)).real
    v["<L R>"] = wick_polynomial(M, prod(half, right)).real
    for key, word in LADDER_WORDS.items():
        v[key] = ev(word)
    for q, form in _quadrature_forms().items():
        mean = wick_polynomial(M, form).real
        sq = wick_polynomial(M, square_linear(form)).real
        if q.startswith("X"):
            v[f"<{q}>"] = mean
            v[f"<{q}^2>"] = sq
        else:
            v[f"var({q})"] = sq - mean ** 2
    for q, form in rotated_forms(params.chi).items():
        mean = wick_polynomial(M, form).real
        v[f"var({q})"] = wick_polynomial(M, square_linear(form)).real - mean ** 2
    _derived(v)
    return MomentReport("wick", v)


def _linear_operator(basis: FockBasis, form):
    out = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for c, w in form:
        out = out + monomial(basis, w, c)
    return out


def state_moments(state: StateVector, chi: float | None = None) -> MomentReport:
    """Moments from the amplitudes of a four-mode state.

    ``chi`` selects the rotation angle for the rotated quadratures (skipped
    when omitted).
    """
    basis = state.basis
    if basis.mode_count != 4:
        raise ValueError("state_moments needs a four-mode state")
    psi = state.amplitudes
    p = np.abs(psi) ** 2
    occ = basis.occupations.astype(float)
    n = {m: occ[:, i] for i, m in enumerate(MODES)}
    v = {}
    for m in MODES:
        v[f"<n_{m}>"] = float(p @ n[m])
        v[f"<n_{m}^2>"] = float(p @ n[m] ** 2)
    for x, y in NUMBER_PAIRS:
        v[f"<n_{x} n_{y}>"] = float(p @ (n[x] * n[y]))
    L = 0.5 * (n["a"] + n["b"])
    R = 0.5 * (n["c"] + n["d"])
    v.update({"<L>": float(p @ L), "<R>": float(p @ R),
              "<L_z>": float(p @ (0.5 * (n["a"] - n["b"]))), "<R_z>": float(p @ (0.5 * (n["c"] - n["d"]))),
              "<L^2>": float(p @ L ** 2), "<R^2>": float(p @ R ** 2), "<L R>": float(p @ (L * R))})
    for key, word in LADDER_WORDS.items():
        v[key] = complex(np.vdot(psi, monomial(basis, word) @ psi))
    forms = dict(_quadrature_forms())
    if chi is not None:
        forms.update(rotated_forms(chi))
    for q, form in forms.items():
        w = _linear_operator(basis, form) @ psi
        mean = float(np.vdot(psi, w).real)
        sq = float(np.vdot(w, w).real)
        if q in ("X1", "X2", "X3", "X4"):
            v[f"<{q}>"] = mean
            v[f"<{q}^2>"] = sq
        else:
            v[f"var({q})"] = sq - mean ** 2
    _derived(v)
    return MomentReport("state", v)


# ---------------------------------------------------------------------------
# reduced density and entropy

@dataclass
class ReducedDensity:
    matrix: np.ndarray
    eigenvalues: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def reduced_density(state: StateVector) -> ReducedDensity:
    """Trace out the second half of the modes ((c, d) for four modes, b for two)."""
    basis = state.basis
    if basis.mode_count not in (2, 4):
        raise ValueError("reduced_density needs a two- or four-mode state")
    half = (basis.cutoff + 1) ** (basis.mode_count // 2)
    psi = state.amplitudes.reshape(half, half)
    rho = psi @ psi.conj().T
    eig = np.sort(np.linalg.eigvalsh(rho))[::-1]
    return ReducedDensity(rho, eig)


def von_neumann_entropy(eigenvalues: np.ndarray, floor: float = 1e-300) -> float:
    """``-sum p log p`` (natural log) over strictly positive eigenvalues."""
    p = np.asarray(eigenvalues, dtype=float)
    p = p[p > floor]
    return float(-(p * np.log(p)).sum()) + 0.0   # no negative zero


def entropy_series(rho: float, model: str = "so41", tail_tol: float = 1e-12,
                   step_tol: float = 1e-10, max_terms: int = 1_000_000) -> float:
    """Entanglement entropy from the known Schmidt spectrum.

    ``so41``: eigenvalues ``cosh**-4 tanh**(4S)`` with multiplicity ``2S + 1``.
    ``so21``: eigenvalues ``cosh**-2 tanh**(2n)``.  The sum stops once the
    remaining weight is below ``tail_tol`` and the last increment below
    ``step_tol``.
    """
    if model not in ("so41", "so21"):
        raise ValueError(f"model must be 'so41' or 'so21', got {model!r}")
    if rho == 0:
        return 0.0
    x = math.tanh(rho / 2) ** 2
    log_x = math.log(x)
    power = 4 if model == "so41" else 2
    log_c = -power * math.log(math.cosh(rho / 2))
    total, weight = 0.0, 0.0
    for k in range(max_terms):
        mult = k + 1 if model == "so41" else 1
        log_lam = log_c + k * log_x
        lam = math.exp(log_lam)
        inc = -mult * lam * log_lam
        total += inc
        weight += mult * lam
        if 1.0 - weight <= tail_tol and abs(inc) <= step_tol:
            return total
    raise RuntimeError(f"entropy series did not converge within {max_terms} terms at rho={rho}")


# ---------------------------------------------------------------------------
# SO(2,1) references

def so21_closed_moments(rho: float, phi: float) -> dict:
    s2 = math.sinh(rho / 2) ** 2
    sh, ch = math.sinh(rho), math.cosh(rho)
    return {
        "<n_a>": s2, "var(n_a)": 0.25 * sh ** 2, "cov(n_a,n_b)": 0.25 * sh ** 2, "J(n_a,n_b)": 1.0,
        "fluct(n_a)": 1 / math.tanh(rho / 2) if rho else float("nan"),
        "var(X1)": 0.25 * (ch - sh * math.cos(phi)), "var(X2)": 0.25 * (ch + sh * math.cos(phi)),
    }


def so21_wick_moments(rho: float, phi: float) -> dict:
    M = su11_coset(rho, phi)
    na = wick_expectation(M, "Aa").real
    var = wick_expectation(M, "AaAa").real - na ** 2
    nb = wick_expectation(M, "Bb").real
    cov = wick_expectation(M, "AaBb").real - na * nb
    varb = wick_expectation(M, "BbBb").real - nb ** 2
    pos = [(INV_SQRT8, "a"), (INV_SQRT8, "A"), (INV_SQRT8, "b"), (INV_SQRT8, "B")]
    k = -1j * INV_SQRT8
    mom = [(k, "a"), (-k, "A"), (k, "b"), (-k, "B")]
    return {
        "<n_a>": na, "var(n_a)": var, "cov(n_a,n_b)": cov, "J(n_a,n_b)": cov / math.sqrt(var * varb),
        "fluct(n_a)": math.sqrt(var) / na,
        "var(X1)": wick_polynomial(M, square_linear(pos)).real,
        "var(X2)": wick_polynomial(M, square_linear(mom)).real,
    }


def so21_state_moments(state: StateVector) -> dict:
    basis = state.basis
    psi = state.amplitudes
    p = np.abs(psi) ** 2
    na, nb = basis.occupations[:, 0].astype(float), basis.occupations[:, 1].astype(float)
    mean_a, mean_b = p @ na, p @ nb
    var_a, var_b = p @ na ** 2 - mean_a ** 2, p @ nb ** 2 - mean_b ** 2
    cov = p @ (na * nb) - mean_a * mean_b
    pos = [(INV_SQRT8, "a"), (INV_SQRT8, "A"), (INV_SQRT8, "b"), (INV_SQRT8, "B")]
    k = -1j * INV_SQRT8
    mom = [(k, "a"), (-k, "A"), (k, "b"), (-k, "B")]
    out = {"<n_a>": float(mean_a), "var(n_a)": float(var_a), "cov(n_a,n_b)": float(cov),
           "J(n_a,n_b)": float(cov / math.sqrt(var_a * var_b)), "fluct(n_a)": float(math.sqrt(var_a) / mean_a)}
    for name, form in (("var(X1)", pos), ("var(X2)", mom)):
        w = _linear_operator(basis, form) @ psi
        out[name] = float(np.vdot(w, w).real - np.vdot(psi, w).real ** 2)
    return out


def one_mode_closed_moments(rho: float, phi: float) -> dict:
    s2 = math.sinh(rho / 2) ** 2
    sh, ch = math.sinh(rho), math.cosh(rho)
    return {"<n>": s2, "var(n)": 0.5 * sh ** 2,
            "var(X1)": 0.25 * (ch - sh * math.cos(phi)), "var(X2)": 0.25 * (ch + sh * math.cos(phi)),
            "var(X1')": 0.25 * math.exp(-rho), "var(X2')": 0.25 * math.exp(rho)}


def one_mode_state_moments(state: StateVector, phi: float) -> dict:
    """Moments of a one-mode state; primed quadratures are rotated by ``phi/2``."""
    basis = state.basis
    psi = state.amplitudes
    p = np.abs(psi) ** 2
    n = basis.occupations[:, 0].astype(float)
    out = {"<n>": float(p @ n), "var(n)": float(p @ n ** 2 - (p @ n) ** 2)}
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    x1 = [(0.5, "a"), (0.5, "A")]
    x2 = [(-0.5j, "a"), (0.5j, "A")]
    forms = {"var(X1)": x1, "var(X2)": x2,
             "var(X1')": [(c * k, w) for k, w in x1] + [(s * k, w) for k, w in x2],
             "var(X2')": [(-s * k, w) for k, w in x1] + [(c * k, w) for k, w in x2]}
    for name, form in forms.items():
        w = _linear_operator(basis, form) @ psi
        out[name] = float(np.vdot(w, w).real - np.vdot(psi, w).real ** 2)
    return out
