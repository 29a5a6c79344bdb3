"""Squeezed vacua of the four-mode so(4,1) squeeze operator.

Several independent constructions are provided and cross-checked:

* ``numeric``: one exponential of the interaction Hamiltonian applied to the
  vacuum in a truncated Fock space.
* ``euler``: the same operator factored as rotation, one-axis squeeze and
  inverse rotation, each exponentiated separately.
* ``schwinger``: two pseudo-spin squeezes followed by left/right spin
  rotations.
* ``closed``: explicit amplitudes from Wigner rotation matrices.
* ``cg``: the closed form re-expanded in the coupled ``|I, I_z>`` basis of
  the two equal spins and synthesised back.

The numeric routes evolve inside the balanced sector ``n_a + n_b = n_c + n_d``
(an exact invariant subspace of every generator used) and embed the result
into the full basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .coset import SqueezeParams, unit_vector
from .fock import (FockBasis, StateVector, expm_action, fidelity, monomial, polynomial,
                   sector_tail)
from .lie import GeneratorBundle, build_generators
from .wigner import coupling_table, wigner_D

ROUTES = ("numeric", "euler", "schwinger", "closed", "cg")


@dataclass
class SqueezedVacuum:
    params: SqueezeParams
    state: StateVector
    route: str
    leakage: float

    @property
    def basis(self) -> FockBasis:
        return self.state.basis

    @property
    def cutoff(self) -> int:
        return self.state.basis.cutoff


def _require_four_modes(basis: FockBasis) -> None:
    if basis.mode_count != 4:
        raise ValueError(f"a 4-mode basis is required, got {basis.mode_count} modes")


def interaction_hamiltonian(params: SqueezeParams, bundle: GeneratorBundle, rho: float | None = None):
    """``rho * sum_m y^m X^{m5}``; the squeeze operator is ``exp(-i H)``."""
    rho = params.rho if rho is None else rho
    y = unit_vector(params.chi, params.theta, params.phi)
    H = sum(y[m] * bundle.X_ab[(m + 1, 5)] for m in range(4))
    return rho * H


def explicit_hamiltonian(params: SqueezeParams, basis: FockBasis, support=None):
    """The same Hamiltonian written directly in pair operators."""
    rho, chi, theta, phi = params.as_tuple()
    sc, cc = math.sin(chi), math.cos(chi)
    st, ct = math.sin(theta), math.cos(theta)
    e = np.exp(1j * phi)
    half = rho / 2
    create = [
        (half * sc * ct, "AC"), (-half * sc * ct, "BD"),
        (half * sc * st / e, "AD"), (half * sc * st * e, "BC"),
        (-1j * half * cc, "AC"), (-1j * half * cc, "BD"),
    ]
    terms = create + [(np.conj(c), w.lower()[::-1]) for c, w in create]
    return polynomial(basis, terms, support)


def _sector_vacuum(support: np.ndarray) -> np.ndarray:
    v = np.zeros(len(support), dtype=complex)
    v[0] = 1.0
    return v


def _embed(basis: FockBasis, support: np.ndarray | None, vec: np.ndarray) -> StateVector:
    if support is None:
        return StateVector(basis, vec)
    full = np.zeros(basis.dim, dtype=complex)
    full[support] = vec
    return StateVector(basis, full)


def _evolve(basis: FockBasis, factors, support, tol: float) -> StateVector:
    """Apply ``exp(c_k G_k)`` in list order (first entry acts first) to the vacuum."""
    size = basis.dim if support is None else len(support)
    v = np.zeros(size, dtype=complex)
    v[0] = 1.0
    for coeff, gen in factors:
        if coeff == 0:
            continue
        v = expm_action(coeff * gen, v, tol)
    return _embed(basis, support, v)


def _support(basis: FockBasis, restrict: bool):
    return basis.pair_sector() if restrict else None


def squeezed_vacuum_numeric(params: SqueezeParams, basis: FockBasis, tol: float = 1e-10,
                            restrict: bool = True, rho: float | None = None) -> SqueezedVacuum:
    """``exp(-i rho y^m X^{m5}) |0>`` by one exponential action.

    ``rho`` overrides ``params.rho`` and may be negative (used for the
    inverse operator).
    """
    _require_four_modes(basis)
    support = _support(basis, restrict)
    bundle = build_generators(basis, support)
    H = interaction_hamiltonian(params, bundle, rho)
    state = _evolve(basis, [(-1j, H)], support, tol)
    r = params.rho if rho is None else abs(rho)
    return SqueezedVacuum(params, state, "numeric", sector_tail(r, basis.cutoff))


def squeezed_vacuum_euler(params: SqueezeParams, basis: FockBasis, tol: float = 1e-10,
                          restrict: bool = True) -> SqueezedVacuum:
    """``H^dag exp(-i rho X^{45}) H |0>`` with ``H = e^{i chi X34} e^{i theta X13} e^{-i phi X12}``."""
    _require_four_modes(basis)
    support = _support(basis, restrict)
    g = build_generators(basis, support)
    rho, chi, theta, phi = params.as_tuple()
    X = g.X_ab
    factors = [
        (-1j * phi, X[(1, 2)]), (1j * theta, X[(1, 3)]), (1j * chi, X[(3, 4)]),
        (-1j * rho, X[(4, 5)]),
        (-1j * chi, X[(3, 4)]), (-1j * theta, X[(1, 3)]), (1j * phi, X[(1, 2)]),
    ]
    return SqueezedVacuum(params, _evolve(basis, factors, support, tol), "euler",
                          sector_tail(rho, basis.cutoff))


def _spin_rotation_factors(ops, alpha: float, beta: float, gamma: float):
    """Factors of ``exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)`` in acting order."""
    _, Jy, Jz = ops
    return [(-1j * gamma, Jz), (-1j * beta, Jy), (-1j * alpha, Jz)]


def squeezed_vacuum_schwinger(params: SqueezeParams, basis: FockBasis, tol: float = 1e-10,
                              restrict: bool = True) -> SqueezedVacuum:
    """``D_L(phi, theta, -chi) D_R(-phi, theta, -chi) S_T(rho) S_B(rho) |0>``."""
    _require_four_modes(basis)
    support = _support(basis, restrict)
    g = build_generators(basis, support)
    rho, chi, theta, phi = params.as_tuple()
    factors = [(1j * rho, g.B[0]), (1j * rho, g.T[0])]
    factors += _spin_rotation_factors(g.R, -phi, theta, -chi)
    factors += _spin_rotation_factors(g.L, phi, theta, -chi)
    return SqueezedVacuum(params, _evolve(basis, factors, support, tol), "schwinger",
                          sector_tail(rho, basis.cutoff))


# ---------------------------------------------------------------------------
# closed forms

def sector_amplitudes(params: SqueezeParams, two_s: int) -> np.ndarray:
    """Amplitude matrix ``A[L, R]`` of spin sector ``2S`` (descending ``L_z``, ``R_z``).

    ``A = cosh(rho/2)**-2 (-tanh(rho/2))**(2S) D(phi, theta, -chi) D(-phi, theta, -chi)^T``.
    """
    rho, chi, theta, phi = params.as_tuple()
    spin = two_s / 2
    D1 = wigner_D(spin, phi, theta, -chi)
    D2 = wigner_D(spin, -phi, theta, -chi)
    weight = (-math.tanh(rho / 2)) ** two_s / math.cosh(rho / 2) ** 2
    return weight * (D1 @ D2.T)


def _sector_indices(basis: FockBasis, two_s: int) -> np.ndarray:
    """Full-basis indices for ``(n_a, n_b, n_c, n_d) = (2S - i, i, 2S - j, j)``."""
    r = np.arange(two_s + 1)
    i, j = np.meshgrid(r, r, indexing="ij")
    occ = np.stack([two_s - i, i, two_s - j, j], axis=-1).reshape(-1, 4)
    return basis.indices(occ).reshape(two_s + 1, two_s + 1)


def _closed_state(params: SqueezeParams, basis: FockBasis, sectors) -> StateVector:
    amps = np.zeros(basis.dim, dtype=complex)
    for two_s, block in sectors:
        amps[_sector_indices(basis, two_s)] = block
    return StateVector(basis, amps)


def squeezed_vacuum_closed_form(params: SqueezeParams, basis: FockBasis) -> SqueezedVacuum:
    """Closed-form amplitudes for every complete spin sector ``2S <= cutoff``."""
    _require_four_modes(basis)
    sectors = [(k, sector_amplitudes(params, k)) for k in range(basis.cutoff + 1)]
    state = _closed_state(params, basis, sectors)
    return SqueezedVacuum(params, state, "closed", max(0.0, 1.0 - state.norm ** 2))


@dataclass
class CGForm:
    """Coefficients of the vacuum in the coupled bases ``|I, I_z>>_S``.

    ``coefficients[2S]`` is an array ``c[I, I_z + 2S]`` including the
    ``cosh**-2 (-tanh)**(2S)`` weight, so the vacuum is
    ``sum_S sum_{I, I_z} c[I, I_z] |I, I_z>>_S``.
    """

    params: SqueezeParams
    coefficients: dict = field(default_factory=dict)

    @property
    def max_two_s(self) -> int:
        return max(self.coefficients)

    def unweighted(self, two_s: int) -> np.ndarray:
        """Sector coefficients without the ``cosh**-2 (-tanh)**(2S)`` weight."""
        rho = self.params.rho
        weight = (-math.tanh(rho / 2)) ** two_s / math.cosh(rho / 2) ** 2
        return self.coefficients[two_s] / weight

    def coefficient(self, two_s: int, I: int, Iz: int) -> complex:
        return complex(self.coefficients[two_s][I, Iz + two_s])

    def total(self, I: int, Iz: int) -> complex:
        """Coefficient summed over the spin sectors that contain ``|I, I_z>>``."""
        return complex(sum(c[I, Iz + k] for k, c in self.coefficients.items() if I <= k))


def cg_form(params: SqueezeParams, max_two_s: int) -> CGForm:
    out = CGForm(params)
    for k in range(max_two_s + 1):
        A = sector_amplitudes(params, k)
        table = coupling_table(k)
        n = k + 1
        r = np.arange(n)
        diag = (r[:, None] + r[None, :]).ravel()  # I_z = k - (r1 + r2)
        coeffs = np.zeros((k + 1, 2 * k + 1), dtype=complex)
        for I in range(k + 1):
            proj = (table[2 * I] * A).ravel()
            col = np.zeros(2 * k + 1, dtype=complex)
            np.add.at(col, 2 * k - diag, proj)
            coeffs[I] = col
        out.coefficients[k] = coeffs
    return out


def cg_resynthesize(form: CGForm, basis: FockBasis) -> SqueezedVacuum:
    """Rebuild the Fock amplitudes from coupled-basis coefficients."""
    _require_four_modes(basis)
    sectors = []
    for k, coeffs in form.coefficients.items():
        if k > basis.cutoff:
            continue
        table = coupling_table(k)
        r = np.arange(k + 1)
        iz = k - (r[:, None] + r[None, :])
        A = np.zeros((k + 1, k + 1), dtype=complex)
        for I in range(k + 1):
            A += table[2 * I] * coeffs[I, iz + k]
        sectors.append((k, A))
    state = _closed_state(form.params, basis, sectors)
    return SqueezedVacuum(form.params, state, "cg", max(0.0, 1.0 - state.norm ** 2))


def squeezed_vacuum(params: SqueezeParams, basis: FockBasis, route: str = "numeric",
                    tol: float = 1e-10) -> SqueezedVacuum:
    if route == "numeric":
        return squeezed_vacuum_numeric(params, basis, tol)
    if route == "euler":
        return squeezed_vacuum_euler(params, basis, tol)
    if route == "schwinger":
        return squeezed_vacuum_schwinger(params, basis, tol)
    if route == "closed":
        return squeezed_vacuum_closed_form(params, basis)
    if route == "cg":
        return cg_resynthesize(cg_form(params, basis.cutoff), basis)
    raise ValueError(f"unknown route {route!r}; choose from {ROUTES}")


def pairwise_fidelities(states: dict) -> dict:
    names = list(states)
    return {(a, b): fidelity(states[a].state, states[b].state)
            for i, a in enumerate(names) for b in names[i + 1:]}


# ---------------------------------------------------------------------------
# two-mode and one-mode references

def two_mode_squeezed_vacuum(rho: float, phi: float, basis: FockBasis) -> StateVector:
    """``cosh(rho/2)**-1 sum_n (-tanh(rho/2))**n e^{i n phi} |n, n>`` truncated at the cutoff."""
    if basis.mode_count != 2:
        raise ValueError(f"a 2-mode basis is required, got {basis.mode_count} modes")
    n = np.arange(basis.cutoff + 1)
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.indices(np.stack([n, n], axis=1))] = (
        (-math.tanh(rho / 2)) ** n * np.exp(1j * n * phi) / math.cosh(rho / 2))
    return StateVector(basis, amps)


def two_mode_squeeze_generator(rho: float, phi: float, basis: FockBasis, support=None):
    """Anti-Hermitian ``-(rho/2) e^{i phi} a^dag b^dag + (rho/2) e^{-i phi} a b``."""
    e = np.exp(1j * phi)
    return polynomial(basis, [(-(rho / 2) * e, "AB"), ((rho / 2) / e, "ab")], support)


def two_mode_squeezed_vacuum_numeric(rho: float, phi: float, basis: FockBasis, tol: float = 1e-10) -> StateVector:
    return _evolve(basis, [(1.0, two_mode_squeeze_generator(rho, phi, basis))], None, tol)


def two_mode_pseudo_spin(basis: FockBasis):
    """``(T_x, T_y, T_z, T_+, T_-)`` for the doublet ``(a, b^dag)``."""
    Tx = polynomial(basis, [(0.5j, "AB"), (-0.5j, "ab")])
    Ty = polynomial(basis, [(0.5, "AB"), (0.5, "ab")])
    Tz = polynomial(basis, [(0.5, "Aa"), (0.5, "Bb")], constant=0.5)
    return Tx, Ty, Tz, monomial(basis, "AB"), monomial(basis, "ab")


def two_mode_schwinger_vacuum(rho: float, phi: float, basis: FockBasis, tol: float = 1e-10) -> StateVector:
    """``exp(i phi T_z) exp(i rho T_x) |0>``; equals ``e^{i phi/2}`` times the Dirac-type vacuum."""
    Tx, _, Tz, _, _ = two_mode_pseudo_spin(basis)
    return _evolve(basis, [(1j * rho, Tx), (1j * phi, Tz)], None, tol)


def one_mode_squeeze_generator(rho: float, phi: float, basis: FockBasis):
    e = np.exp(1j * phi)
    return polynomial(basis, [(-(rho / 4) * e, "AA"), ((rho / 4) / e, "aa")])


def one_mode_squeezed_vacuum_numeric(rho: float, phi: float, basis: FockBasis, tol: float = 1e-10) -> StateVector:
    if basis.mode_count != 1:
        raise ValueError(f"a 1-mode basis is required, got {basis.mode_count} modes")
    return _evolve(basis, [(1.0, one_mode_squeeze_generator(rho, phi, basis))], None, tol)


def product_of_two_mode_vacua(rho: float, phi_ac: float, phi_bd: float, basis: FockBasis,
                              pairing: str = "ac") -> StateVector:
    """Four-mode product of two-mode squeezed vacua.

    ``pairing="ac"`` squeezes (a, c) with ``phi_ac`` and (b, d) with
    ``phi_bd``; ``pairing="ad"`` squeezes (a, d) and (b, c) instead.
    """
    _require_four_modes(basis)
    pb = FockBasis(2, basis.cutoff)
    n = basis.cutoff + 1
    first = two_mode_squeezed_vacuum(rho, phi_ac, pb).amplitudes.reshape(n, n)
    second = two_mode_squeezed_vacuum(rho, phi_bd, pb).amplitudes.reshape(n, n)
    if pairing == "ac":
        amps = np.einsum("ac,bd->abcd", first, second)
    elif pairing == "ad":
        amps = np.einsum("ad,bc->abcd", first, second)
    else:
        raise ValueError(f"pairing must be 'ac' or 'ad', got {pairing!r}")
    return StateVector(basis, amps.reshape(-1))


# ---------------------------------------------------------------------------
# structural checks

HALF_PI = math.pi / 2


def _on_locus(params: SqueezeParams, locus: str) -> bool:
    close = math.isclose
    if locus == "theta0":
        return params.theta == 0
    if locus == "chi0":
        return params.chi == 0
    if locus == "half_pi":
        return all(close(v, HALF_PI, abs_tol=1e-15) for v in (params.chi, params.theta, params.phi))
    raise ValueError(f"unknown locus {locus!r}; choose theta0, chi0 or half_pi")


def dimensional_reductions(params: SqueezeParams, basis: FockBasis, locus: str,
                           tol: float = 1e-10) -> dict:
    """Compare the numeric vacuum with its reduced form on a special locus.

    ``theta0``: product of (a, c) and (b, d) two-mode vacua at phases
    ``chi`` and ``-chi``.  ``chi0``: ``(-t)^{2S} |S, S_z>|S, S_z>``.
    ``half_pi``: product of (a, d) and (b, c) vacua at phases 0 and pi, i.e.
    ``(-1)^{S - S_z} |S, S_z>|S, -S_z>``.
    """
    if not _on_locus(params, locus):
        raise ValueError(f"parameters {params.as_tuple()} are not on the {locus} locus")
    numeric = squeezed_vacuum_numeric(params, basis, tol).state
    t, ch2 = math.tanh(params.rho / 2), math.cosh(params.rho / 2) ** 2
    occ = basis.occupations
    expected = np.zeros(basis.dim, dtype=complex)
    if locus == "theta0":
        product = product_of_two_mode_vacua(params.rho, params.chi, -params.chi, basis, "ac")
        expected = product.amplitudes
    elif locus == "chi0":
        mask = (occ[:, 0] == occ[:, 2]) & (occ[:, 1] == occ[:, 3])
        k = occ[mask, 0] + occ[mask, 1]
        expected[mask] = (-t) ** k / ch2
        product = None
    else:
        product = product_of_two_mode_vacua(params.rho, 0.0, math.pi, basis, "ad")
        mask = (occ[:, 0] == occ[:, 3]) & (occ[:, 1] == occ[:, 2])
        k = occ[mask, 0] + occ[mask, 1]
        expected[mask] = (-t) ** k * (-1.0) ** occ[mask, 1] / ch2
    # compare on complete sectors only; partial sectors differ by truncation
    k_all = occ[:, 0] + occ[:, 1]
    full = k_all <= basis.cutoff
    report = {
        "locus": locus,
        "amplitude_residual": float(np.max(np.abs(numeric.amplitudes[full] - expected[full]))),
        "fidelity": float(abs(np.vdot(expected, numeric.amplitudes))),
    }
    if product is not None:
        report["product_fidelity"] = fidelity(product, numeric)
    return report


def schwinger_vs_dirac_check(params: SqueezeParams, basis: FockBasis, tol: float = 1e-10) -> dict:
    """Overlap of the Schwinger-type and Dirac-type vacua, magnitude and phase."""
    dirac = squeezed_vacuum_numeric(params, basis, tol).state
    schwinger = squeezed_vacuum_schwinger(params, basis, tol).state
    ov = dirac.inner(schwinger)
    return {"fidelity": abs(ov), "phase": float(np.angle(ov))}


def two_mode_schwinger_phase(rho: float, phi: float, basis: FockBasis, tol: float = 1e-10) -> dict:
    dirac = two_mode_squeezed_vacuum_numeric(rho, phi, basis, tol)
    schwinger = two_mode_schwinger_vacuum(rho, phi, basis, tol)
    ov = dirac.inner(schwinger)
    return {"fidelity": abs(ov), "phase": float(np.angle(ov))}


def phase_gauge_transform(state: StateVector, alpha: float, beta: float) -> StateVector:
    """Apply ``a -> e^{-i alpha} a, b -> e^{i beta} b, c -> e^{i alpha} c, d -> e^{-i beta} d``.

    As a unitary on states this multiplies ``|n>`` by
    ``exp(-i (alpha n_a - beta n_b - alpha n_c + beta n_d))``.
    """
    occ = state.basis.occupations
    ph = alpha * occ[:, 0] - beta * occ[:, 1] - alpha * occ[:, 2] + beta * occ[:, 3]
    return StateVector(state.basis, state.amplitudes * np.exp(-1j * ph))
