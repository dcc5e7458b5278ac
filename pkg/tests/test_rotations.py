import math

import numpy as np
import pytest
import scipy.stats

from o3algebra import (
    EulerAngles,
    Irrep,
    O3Element,
    compose,
    complex_to_real,
    d_o3,
    generators,
    identity_o3,
    inversion_o3,
    irreps_matrix,
    matrix_to_angles,
    rand_angles,
    rand_o3,
    rot_matrix,
    wigner_d,
)
from o3algebra.rotations import _su2_generators


def test_rot_matrix_identity():
    assert np.allclose(rot_matrix(EulerAngles(0, 0, 0)), np.eye(3))


def test_rot_matrix_same_axis_composition(rng):
    a, g = rng.uniform(0, 2 * np.pi, 2)
    left = rot_matrix((a, 0, 0)) @ rot_matrix((0, 0, g))
    assert np.allclose(left, rot_matrix((a, 0, g)), atol=1e-14)


def test_rot_matrix_orthogonal(rng):
    for _ in range(50):
        R = rot_matrix(rand_angles(rng))
        assert np.abs(R.T @ R - np.eye(3)).max() < 1e-12
        assert abs(np.linalg.det(R) - 1.0) < 1e-12


def test_matrix_to_angles_roundtrip(rng):
    for _ in range(50):
        angles = rand_angles(rng)
        R = rot_matrix(angles)
        assert np.abs(rot_matrix(matrix_to_angles(R)) - R).max() < 1e-12


def test_matrix_to_angles_gimbal():
    R = rot_matrix((0.7, 0.0, 0.0))
    assert np.abs(rot_matrix(matrix_to_angles(R)) - R).max() < 1e-12


def test_rand_o3_haar_mean():
    rng = np.random.default_rng(11)
    n = 100_000
    acc = np.zeros((3, 3))
    for _ in range(n):
        acc += rot_matrix(rand_angles(rng))
    mean = acc / n
    # per-entry variance of a Haar rotation entry is 1/3
    assert np.abs(mean).max() < 3.0 * math.sqrt(1.0 / 3.0 / n)


def test_rand_o3_cos_beta_uniform():
    rng = np.random.default_rng(12)
    cos_betas = np.array([math.cos(rand_angles(rng).beta) for _ in range(20_000)])
    stat = scipy.stats.kstest(cos_betas, scipy.stats.uniform(loc=-1, scale=2).cdf)
    assert stat.pvalue > 1e-3


def test_rand_o3_inversion_fair():
    rng = np.random.default_rng(13)
    n = 20_000
    freq = sum(rand_o3(rng).inversion for _ in range(n)) / n
    assert abs(freq - 0.5) < 3 * 0.5 / math.sqrt(n)


@pytest.mark.parametrize("l", range(7))
def test_complex_to_real_unitary(l):
    A = complex_to_real(l)
    assert np.abs(A @ A.conj().T - np.eye(2 * l + 1)).max() < 1e-12


def test_complex_to_real_l0():
    assert complex_to_real(0)[0, 0] == 1.0


@pytest.mark.parametrize("l", range(1, 7))
def test_complex_wigner_conjugates_to_real(l, rng):
    """The complex rotation matrices become real in the changed basis."""
    Xc, Yc, Zc = _su2_generators(l)
    A = complex_to_real(l)
    for X in (Xc, Yc, Zc):
        theta = rng.uniform(0, 2 * np.pi)
        w, V = np.linalg.eigh(-1j * X)
        Dc = (V * np.exp(1j * theta * w)) @ V.conj().T
        Dr = A.conj().T @ Dc @ A
        assert np.abs(Dr.imag).max() < 1e-12


def test_generators_l0():
    g = generators(0)
    for J in g:
        assert J.shape == (1, 1)
        assert J[0, 0] == 0.0


def test_generators_l1_jy_eigenvalues():
    w = np.linalg.eigvals(generators(1).y.astype(complex))
    assert np.allclose(sorted(w.imag), [-1, 0, 1], atol=1e-12)
    assert np.abs(w.real).max() < 1e-12


@pytest.mark.parametrize("l", range(9))
def test_generator_eigenvalues(l):
    """Complex eigenvalues of J_y are -il..il."""
    w = np.linalg.eigvals(generators(l).y.astype(complex))
    assert np.allclose(sorted(w.imag), np.arange(-l, l + 1), atol=1e-10)


@pytest.mark.parametrize("l", range(9))
def test_generators_antisymmetric_real_commutators(l):
    Jx, Jy, Jz = generators(l)
    for J in (Jx, Jy, Jz):
        assert np.abs(J + J.T).max() < 1e-12
    assert np.abs(Jx @ Jy - Jy @ Jx - Jz).max() < 1e-12
    assert np.abs(Jy @ Jz - Jz @ Jy - Jx).max() < 1e-12
    assert np.abs(Jz @ Jx - Jx @ Jz - Jy).max() < 1e-12


def test_generators_diagonal_in_complex_basis():
    """Conjugating J_y back to the complex basis gives a diagonal matrix."""
    for l in range(1, 5):
        A = complex_to_real(l)
        back = A @ generators(l).y @ A.conj().T
        off = back - np.diag(np.diag(back))
        assert np.abs(off).max() < 1e-12


def test_wigner_d_l0(rng):
    assert wigner_d(0, rand_angles(rng)).shape == (1, 1)
    assert abs(wigner_d(0, rand_angles(rng))[0, 0] - 1.0) < 1e-15


def test_wigner_d_l1_is_rotation_matrix(rng):
    """Fixes the basis ordering convention: no permutation needed."""
    for _ in range(20):
        a = rand_angles(rng)
        assert np.abs(wigner_d(1, a) - rot_matrix(a)).max() < 1e-13


@pytest.mark.parametrize("l", range(9))
def test_wigner_d_orthogonal(l, rng):
    for _ in range(10):
        D = wigner_d(l, rand_angles(rng))
        assert np.abs(D.T @ D - np.eye(2 * l + 1)).max() < 1e-11


@pytest.mark.parametrize("l", range(9))
def test_wigner_d_homomorphism(l, rng):
    for _ in range(10):
        g1, g2 = rand_o3(rng), rand_o3(rng)
        D12 = wigner_d(l, compose(g1, g2).rotation)
        assert np.abs(wigner_d(l, g1.rotation) @ wigner_d(l, g2.rotation) - D12).max() < 1e-10


@pytest.mark.parametrize("l", range(1, 6))
def test_wigner_d_finite_difference_generator(l):
    J = generators(l).y
    # second-order term is (eps/2) J^2, whose entries grow like l^2
    bound = np.abs(J @ J).max()
    for eps in (1e-5, 1e-6):
        fd = (wigner_d(l, (eps, 0.0, 0.0)) - np.eye(2 * l + 1)) / eps
        assert np.abs(fd - J).max() < eps * bound


def test_d_o3_parity_vector():
    assert np.allclose(d_o3(Irrep("1o"), inversion_o3()), -np.eye(3))


def test_d_o3_parity_pseudovector():
    assert np.allclose(d_o3(Irrep("1e"), inversion_o3()), np.eye(3))


def test_d_o3_scalar(rng):
    g = rand_o3(rng)
    assert np.allclose(d_o3(Irrep("0e"), g), np.eye(1))


def test_d_o3_identity():
    assert np.allclose(d_o3(Irrep("2o"), identity_o3()), np.eye(5))


def test_irreps_matrix_blockdiag(rng):
    g = rand_o3(rng)
    M = irreps_matrix("2x0e + 1x1o", g)
    assert M.shape == (5, 5)
    assert np.allclose(M[:2, :2], np.eye(2))
    assert np.allclose(M[2:, 2:], d_o3(Irrep("1o"), g))
    assert np.abs(M[:2, 2:]).max() == 0.0


def test_compose_inversions():
    g = compose(inversion_o3(), inversion_o3())
    assert not g.inversion
    assert np.allclose(rot_matrix(g.rotation), np.eye(3))


def test_inversion_commutes_with_rotation(rng):
    a = rand_angles(rng)
    g1 = compose(O3Element(a, False), inversion_o3())
    g2 = compose(inversion_o3(), O3Element(a, False))
    assert np.abs(rot_matrix(g1.rotation) - rot_matrix(g2.rotation)).max() < 1e-12
    assert g1.inversion and g2.inversion
