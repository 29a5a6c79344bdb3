"""Hyperboloid coordinates, the 4x4 coset matrix and its factorisations.

The squeeze parameters ``(rho, chi, theta, phi)`` are polar coordinates on
the upper sheet of the two-sheeted hyperboloid ``-x_m x_m + x_5**2 = 1``.
The coset matrix is ``exp(i rho y^m Sigma_{m5})`` with ``y = x / sinh(rho)``
the unit 4-vector.  Lower indices carry the metric, so ``Sigma_{m5} = -Sigma^{m5}``
and ``q_m = -q^m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .lie import ETA5, K, Q, QBAR, SIGMA, gamma, k_vector, sigma

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class SqueezeParams:
    rho: float
    chi: float
    theta: float
    phi: float

    def __post_init__(self):
        vals = (self.rho, self.chi, self.theta, self.phi)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"squeeze parameters must be finite, got {vals}")
        if self.rho < 0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")
        if not 0 <= self.chi <= math.pi:
            raise ValueError(f"chi must lie in [0, pi], got {self.chi}")
        if not 0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0 <= self.phi < TWO_PI:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    @classmethod
    def random(cls, rng: np.random.Generator, rho_max: float = 1.5, rho_min: float = 0.0) -> "SqueezeParams":
        return cls(float(rng.uniform(rho_min, rho_max)), float(rng.uniform(0, math.pi)),
                   float(rng.uniform(0, math.pi)), float(rng.uniform(0, TWO_PI)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.rho, self.chi, self.theta, self.phi)


def unit_vector(chi: float, theta: float, phi: float) -> np.ndarray:
    """Unit 4-vector ``y^m`` on the three-sphere."""
    sc = math.sin(chi)
    return np.array([sc * math.sin(theta) * math.cos(phi), sc * math.sin(theta) * math.sin(phi),
                     sc * math.cos(theta), math.cos(chi)])


def polar_to_cartesian(params: SqueezeParams) -> np.ndarray:
    """Hyperboloid point ``(x^1, ..., x^5)``."""
    y = unit_vector(params.chi, params.theta, params.phi)
    return np.concatenate([math.sinh(params.rho) * y, [math.cosh(params.rho)]])


def quaternion_lower(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(y^m q_m, y^m qbar_m)`` with lowered indices (``q_m = -q^m``)."""
    yq = -sum(y[m] * Q[m] for m in range(4))
    yqbar = -sum(y[m] * QBAR[m] for m in range(4))
    return yq, yqbar


def coset_matrix(params: SqueezeParams) -> np.ndarray:
    """Coset matrix from its explicit entries."""
    rho, chi, theta, phi = params.as_tuple()
    ch, sh = math.cosh(rho / 2), math.sinh(rho / 2)
    cc, sc = math.cos(chi), math.sin(chi)
    ct, st = math.cos(theta), math.sin(theta)
    e = np.exp(1j * phi)
    u = cc + 1j * sc * ct
    v = 1j * sc * st
    return np.array([
        [ch, 0, -sh * u, -sh * v / e],
        [0, ch, -sh * v * e, -sh * np.conj(u)],
        [-sh * np.conj(u), sh * v / e, ch, 0],
        [sh * v * e, -sh * u, 0, ch],
    ], dtype=complex)


def coset_matrix_blocks(params: SqueezeParams) -> np.ndarray:
    """Coset matrix from the 2x2 block form ``[[ch, sh y.qbar], [sh y.q, ch]]``."""
    ch, sh = math.cosh(params.rho / 2), math.sinh(params.rho / 2)
    yq, yqbar = quaternion_lower(unit_vector(params.chi, params.theta, params.phi))
    return np.block([[ch * np.eye(2), sh * yqbar], [sh * yq, ch * np.eye(2)]])


def coset_generator(params: SqueezeParams) -> np.ndarray:
    """``i rho y^m Sigma_{m5}`` (lowered ``Sigma_{m5} = -Sigma^{m5}``)."""
    y = unit_vector(params.chi, params.theta, params.phi)
    return 1j * params.rho * sum(-y[m] * sigma(m + 1, 5) for m in range(4))


def coset_matrix_expm(params: SqueezeParams) -> np.ndarray:
    return scipy.linalg.expm(coset_generator(params))


def expi(generator: np.ndarray, angle: float) -> np.ndarray:
    """``exp(i angle G)``."""
    return scipy.linalg.expm(1j * angle * generator)


def euler_rotation(chi: float, theta: float, phi: float) -> np.ndarray:
    """``exp(i chi Sigma^34) exp(i theta Sigma^13) exp(-i phi Sigma^12)``."""
    return expi(sigma(3, 4), chi) @ expi(sigma(1, 3), theta) @ expi(sigma(1, 2), -phi)


def su2_left_block(chi: float, theta: float, phi: float) -> np.ndarray:
    """Upper block of ``euler_rotation``; the lower block is this at ``-chi``."""
    return (expi(SIGMA[2], -chi / 2) @ expi(SIGMA[1], theta / 2) @ expi(SIGMA[2], phi / 2))


@dataclass
class CosetDecomposition:
    coset: np.ndarray
    euler_rotation: np.ndarray
    euler_core: np.ndarray
    gauss_upper: np.ndarray
    gauss_diagonal: np.ndarray
    gauss_lower: np.ndarray

    def euler_product(self) -> np.ndarray:
        return self.euler_rotation.conj().T @ self.euler_core @ self.euler_rotation

    def gauss_product(self) -> np.ndarray:
        return self.gauss_upper @ self.gauss_diagonal @ self.gauss_lower

    def residuals(self) -> dict[str, float]:
        return {
            "euler": float(np.max(np.abs(self.euler_product() - self.coset))),
            "gauss": float(np.max(np.abs(self.gauss_product() - self.coset))),
        }


def decompose(params: SqueezeParams) -> CosetDecomposition:
    """Euler and Gauss factorisations of the coset matrix."""
    rho, chi, theta, phi = params.as_tuple()
    H = euler_rotation(chi, theta, phi)
    core = expi(sigma(4, 5), -rho)
    t = math.tanh(rho / 2)
    yq, yqbar = quaternion_lower(unit_vector(chi, theta, phi))
    z = np.zeros((2, 2), dtype=complex)
    upper = scipy.linalg.expm(t * np.block([[z, yqbar], [z, z]]))
    lower = scipy.linalg.expm(t * np.block([[z, z], [yq, z]]))
    diag = scipy.linalg.expm(-math.log(math.cosh(rho / 2)) * K)
    return CosetDecomposition(coset_matrix(params), H, core, upper, diag, lower)


def coset_checks(params: SqueezeParams) -> dict[str, float]:
    """Residuals of every coset-matrix identity at one parameter point."""
    M = coset_matrix(params)
    dec = decompose(params)
    out = {
        "explicit_vs_blocks": float(np.max(np.abs(M - coset_matrix_blocks(params)))),
        "explicit_vs_expm": float(np.max(np.abs(M - coset_matrix_expm(params)))),
        "pseudo_unitary": float(np.max(np.abs(M.conj().T @ K @ M - K))),
        "determinant": float(abs(np.linalg.det(M) - 1)),
    }
    out.update(dec.residuals())
    H = dec.euler_rotation
    HL = su2_left_block(params.chi, params.theta, params.phi)
    HR = su2_left_block(-params.chi, params.theta, params.phi)
    out["euler_blocks"] = float(max(np.max(np.abs(H[:2, :2] - HL)), np.max(np.abs(H[2:, 2:] - HR)),
                                    np.max(np.abs(H[:2, 2:])), np.max(np.abs(H[2:, :2]))))
    out.update({f"hopf_{k}": v for k, v in hopf_checks(params).items()})
    return out


# ---------------------------------------------------------------------------
# Hopf-type maps

def hopf_spinor(params: SqueezeParams, psi: np.ndarray | None = None) -> np.ndarray:
    """Four-spinor ``M (psi, 0)^T`` for a unit two-spinor ``psi``."""
    if psi is None:
        psi = np.array([1.0, 0.0], dtype=complex)
    return coset_matrix(params) @ np.concatenate([psi, [0, 0]])


def hopf_spinor_cartesian(x: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Same spinor written through the Cartesian point ``x``."""
    yq = -sum(x[m] * Q[m] for m in range(4))
    return np.concatenate([(1 + x[4]) * psi, yq @ psi]) / math.sqrt(2 * (1 + x[4]))


def hopf_checks(params: SqueezeParams, psi: np.ndarray | None = None) -> dict[str, float]:
    if psi is None:
        psi = np.array([1.0, 0.0], dtype=complex)
    Psi = hopf_spinor(params, psi)
    x = polar_to_cartesian(params)
    xk = np.array([np.vdot(Psi, k_vector(a) @ Psi) for a in range(1, 6)])
    slash = sum(ETA5[a, a] * x[a] * gamma(a + 1) for a in range(5))
    return {
        "norm": float(abs(np.vdot(Psi, K @ Psi) - 1)),
        "coordinates": float(np.max(np.abs(xk - x))),
        "eigen": float(np.max(np.abs(slash @ Psi - Psi))),
        "cartesian": float(np.max(np.abs(Psi - hopf_spinor_cartesian(x, psi)))),
    }


def compact_hopf(phi: float, theta: float, chi: float) -> tuple[np.ndarray, np.ndarray]:
    """Unit two-spinor on the three-sphere and its image ``psi^dag sigma psi``."""
    psi = np.array([math.cos(theta / 2) * np.exp(-0.5j * phi),
                    math.sin(theta / 2) * np.exp(0.5j * phi)]) * np.exp(-0.5j * chi)
    x = np.array([np.vdot(psi, s @ psi).real for s in SIGMA])
    return psi, x


KAPPA = (-SIGMA[1], SIGMA[0], np.eye(2, dtype=complex))


def noncompact_hopf(phi: float, rho: float, chi: float) -> tuple[np.ndarray, np.ndarray]:
    """Two-spinor with ``psi^dag sigma_z psi = 1`` and its image ``psi^dag kappa psi``."""
    psi = np.array([math.cosh(rho / 2) * np.exp(0.5j * phi),
                    math.sinh(rho / 2) * np.exp(-0.5j * phi)]) * np.exp(0.5j * chi)
    x = np.array([np.vdot(psi, k @ psi).real for k in KAPPA])
    return psi, x


# ---------------------------------------------------------------------------
# SU(2) and SU(1,1) references

def su2_rotation(phi: float, theta: float, chi: float) -> np.ndarray:
    """Spin-1/2 rotation ``exp(-i phi sz/2) exp(-i theta sy/2) exp(-i chi sz/2)``."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c * np.exp(-0.5j * (chi + phi)), -s * np.exp(0.5j * (chi - phi))],
                     [s * np.exp(-0.5j * (chi - phi)), c * np.exp(0.5j * (chi + phi))]])


def su2_coset(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s * np.exp(-1j * phi)], [s * np.exp(1j * phi), c]])


SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)


def su2_checks(theta: float, phi: float, chi: float = 0.0) -> dict[str, float]:
    """Euler, Gauss and exponential forms of the SU(2) coset element.

    Gauss factors are singular at ``theta = pi``; callers keep ``theta < pi``.
    """
    M = su2_coset(theta, phi)
    ex = [expi(SIGMA[2], -phi / 2), expi(SIGMA[1], -theta / 2), expi(SIGMA[2], -chi / 2)]
    T = math.tan(theta / 2)
    gauss = (scipy.linalg.expm(-T * np.exp(-1j * phi) * SIGMA_PLUS)
             @ scipy.linalg.expm(-math.log(math.cos(theta / 2)) * SIGMA[2])
             @ scipy.linalg.expm(T * np.exp(1j * phi) * SIGMA_MINUS))
    gen = scipy.linalg.expm(-(theta / 2) * (np.exp(-1j * phi) * SIGMA_PLUS - np.exp(1j * phi) * SIGMA_MINUS))
    return {
        "rotation_vs_exponentials": float(np.max(np.abs(su2_rotation(phi, theta, chi) - ex[0] @ ex[1] @ ex[2]))),
        "euler": float(np.max(np.abs(M - su2_rotation(phi, theta, -phi)))),
        "gauss": float(np.max(np.abs(M - gauss))),
        "exponential": float(np.max(np.abs(M - gen))),
        "unitary": float(np.max(np.abs(M.conj().T @ M - np.eye(2)))),
    }


TAU = (1j * SIGMA[0], 1j * SIGMA[1], SIGMA[2])
T_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
T_MINUS = np.array([[0, 0], [-1, 0]], dtype=complex)


def su11_element(phi: float, rho: float, chi: float) -> np.ndarray:
    """``exp(i phi tz/2) exp(-i rho tx/2) exp(i chi tz/2)`` in closed form."""
    ch, sh = math.cosh(rho / 2), math.sinh(rho / 2)
    return np.array([[ch * np.exp(0.5j * (chi + phi)), sh * np.exp(-0.5j * (chi - phi))],
                     [sh * np.exp(0.5j * (chi - phi)), ch * np.exp(-0.5j * (chi + phi))]])


def su11_coset(rho: float, phi: float) -> np.ndarray:
    ch, sh = math.cosh(rho / 2), math.sinh(rho / 2)
    return np.array([[ch, -sh * np.exp(1j * phi)], [-sh * np.exp(-1j * phi), ch]])


def su11_checks(rho: float, phi: float, chi: float = 0.0) -> dict[str, float]:
    M = su11_coset(rho, phi)
    sz = SIGMA[2]
    ex = expi(TAU[2], phi / 2) @ expi(TAU[0], -rho / 2) @ expi(TAU[2], chi / 2)
    t = math.tanh(rho / 2)
    gauss = (scipy.linalg.expm(-t * np.exp(1j * phi) * T_PLUS)
             @ scipy.linalg.expm(-math.log(math.cosh(rho / 2)) * TAU[2])
             @ scipy.linalg.expm(t * np.exp(-1j * phi) * T_MINUS))
    gen = scipy.linalg.expm(-(rho / 2) * np.exp(1j * phi) * T_PLUS + (rho / 2) * np.exp(-1j * phi) * T_MINUS)
    # y = (sin phi, cos phi) contracted with eps_{12} = 1 and lowered tau_n = -tau^n (n = 1, 2)
    y = (math.sin(phi), math.cos(phi))
    eps_form = scipy.linalg.expm(0.5j * rho * (y[0] * -TAU[1] - y[1] * -TAU[0]))
    D = su11_element(phi, rho, chi)
    return {
        "epsilon_form": float(np.max(np.abs(M - eps_form))),
        "element_vs_exponentials": float(np.max(np.abs(D - ex))),
        "element_pseudo_unitary": float(np.max(np.abs(D.conj().T @ sz @ D - sz))),
        "euler": float(np.max(np.abs(M - su11_element(phi, -rho, -phi)))),
        "gauss": float(np.max(np.abs(M - gauss))),
        "exponential": float(np.max(np.abs(M - gen))),
        "pseudo_unitary": float(np.max(np.abs(M.conj().T @ sz @ M - sz))),
    }
