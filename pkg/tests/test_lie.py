import numpy as np
import pytest
import scipy.sparse as sp

from hypersqueeze.fock import FockBasis, StateVector
from hypersqueeze.lie import (PAIRS5, build_generators, casimir_expected, casimir_su22, gamma,
                              k_family_breaks_algebra, k_tensor, k_vector, matrix_family_checks,
                              sandwich_cross_check, sigma, verify_casimir, verify_so42_algebra)


@pytest.fixture(scope="module")
def bundle4():
    return build_generators(FockBasis(4, 4))


def _dense(op):
    return op.toarray() if sp.issparse(op) else np.asarray(op)


def test_matrix_identities_exact():
    for check in matrix_family_checks():
        assert check.passed, f"{check.name}: {check.residual}"


def test_entries_are_dyadic():
    allowed = {0, 0.5, 1}
    for a in range(1, 6):
        assert set(np.abs(gamma(a)).ravel()) <= allowed
    for ab in PAIRS5:
        assert set(np.abs(sigma(*ab)).ravel()) <= allowed
        assert set(np.abs(k_tensor(*ab)).ravel()) <= allowed


def test_bare_k_family_does_not_close():
    breaks = k_family_breaks_algebra()
    assert breaks["clifford"] > 0.5
    assert breaks["so41"] > 0.1


def test_generators_match_spinor_sandwich(bundle4):
    assert sandwich_cross_check(bundle4) == 0.0


def test_generators_hermitian(bundle4):
    ops = list(bundle4.X_a.values()) + list(bundle4.X_ab.values())
    ops += bundle4.L + bundle4.R + bundle4.T + bundle4.B
    for op in ops:
        assert abs(op - op.conj().T).max() < 1e-15


def test_vacuum_expectations(bundle4):
    vac = StateVector.vacuum(bundle4.basis).amplitudes
    assert np.vdot(vac, bundle4.X_a[5] @ vac) == pytest.approx(2.0)
    assert np.vdot(vac, bundle4.T[2] @ vac) == pytest.approx(0.5)
    assert np.vdot(vac, bundle4.L[2] @ vac) == 0


def test_spin_z_diagonals(bundle4):
    occ = bundle4.basis.occupations
    assert np.allclose(bundle4.L[2].diagonal(), 0.5 * (occ[:, 0] - occ[:, 1]))
    assert np.allclose(bundle4.R[2].diagonal(), 0.5 * (occ[:, 2] - occ[:, 3]))
    assert np.allclose(bundle4.T[2].diagonal(), 0.5 * (occ[:, 0] + occ[:, 2] + 1))


def test_spin_algebras_on_interior(bundle4):
    inner = bundle4.basis.interior(2)
    for name, sign in (("L", 1), ("R", 1), ("T", -1), ("B", -1)):
        x, y, z = getattr(bundle4, name)
        # su(2): [x, y] = i z;  su(1,1): [x, y] = -i z
        comm = (x @ y - y @ x - sign * 1j * z).tocsc()[:, inner]
        assert abs(comm).max() < 1e-13, name


def test_left_spin_squared_eigenvalues(bundle4):
    x, y, z = bundle4.L
    L2 = (x @ x + y @ y + z @ z).tocsc()[:, bundle4.basis.interior(2)]
    occ = bundle4.basis.occupations[bundle4.basis.interior(2)]
    s = 0.5 * (occ[:, 0] + occ[:, 1])
    diag = np.array([L2[i, k] for k, i in enumerate(bundle4.basis.interior(2))])
    assert np.allclose(diag, s * (s + 1))


def test_so42_closure_interior(bundle4):
    report = verify_so42_algebra(bundle4, margin=2)
    assert report.passed, (report.worst_pair, report.max_residual)
    assert len(report.residuals) == 225


def test_interior_restriction_matters():
    b = build_generators(FockBasis(4, 3))
    with pytest.raises(ValueError):
        verify_so42_algebra(b, margin=1)


def test_corruption_detected(bundle4):
    X = dict(bundle4.X_ab)
    broken = build_generators(bundle4.basis)
    broken.X_ab = X | {(1, 2): X[(1, 2)] + 1e-3 * sp.identity(bundle4.dim, format="csr")}
    report = verify_so42_algebra(broken, margin=2)
    assert not report.passed


def test_casimir(bundle4):
    report = verify_casimir(bundle4, margin=2)
    assert report.passed
    assert report.vacuum == -12.0
    C = casimir_su22(bundle4)
    i = bundle4.basis.index((1, 1, 0, 0))
    assert abs(C[i, i]) < 1e-12
    assert casimir_expected(np.array([1, 1, 0, 0])) == 0
    assert casimir_expected(np.array([0, 0, 0, 0])) == -12


def test_vector_vs_tensor_convention():
    # the conformal sixth row is -X^a / 2
    b = build_generators(FockBasis(4, 2))
    assert abs(b.X(3, 6) + 0.5 * b.X_a[3]).max() == 0
    assert abs(b.X(5, 2) + b.X_ab[(2, 5)]).max() == 0
    with pytest.raises(ValueError):
        b.X(2, 2)
    assert np.array_equal(_dense(k_vector(5)), np.eye(4))
