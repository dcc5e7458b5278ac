import math

import numpy as np
import pytest

from o3algebra import (
    generator_about,
    irreps_matrix,
    make_grid,
    rand_angles,
    rand_o3,
    rot_matrix,
    sh_blocks,
    sh_irreps,
    sh_orthogonality_check,
    spherical_harmonics,
    wigner_d,
)


def textbook_real_sh(point):
    """Hard-coded l <= 2 oracle, integral normalization.

    Standard tables use the z axis as the polar axis; our components read
    those functions in the order (y, z, x), i.e. textbook (x, y, z) are
    our (z, x, y).
    """
    x, y, z = point / np.linalg.norm(point)
    tx, ty, tz = z, x, y
    l0 = np.array([1.0 / math.sqrt(4 * math.pi)])
    l1 = math.sqrt(3 / (4 * math.pi)) * np.array([ty, tz, tx])
    l2 = np.array(
        [
            math.sqrt(15 / (4 * math.pi)) * tx * ty,
            math.sqrt(15 / (4 * math.pi)) * ty * tz,
            math.sqrt(5 / (16 * math.pi)) * (3 * tz**2 - 1.0),
            math.sqrt(15 / (4 * math.pi)) * tx * tz,
            math.sqrt(15 / (16 * math.pi)) * (tx**2 - ty**2),
        ]
    )
    return [l0, l1, l2]


def test_lmax0_norm():
    out = spherical_harmonics(0, np.array([0.3, -1.0, 2.0]), normalization="norm")
    assert np.allclose(out, [1.0])


def test_l1_is_unit_point(rng):
    p = rng.standard_normal(3)
    out = spherical_harmonics(1, p, normalize=True, normalization="norm")
    assert np.abs(sh_blocks(out, 1)[1] - p / np.linalg.norm(p)).max() < 1e-14


def test_textbook_oracle_l2(rng):
    for _ in range(10):
        p = rng.standard_normal(3)
        ours = sh_blocks(spherical_harmonics(2, p, normalization="integral"), 2)
        ref = textbook_real_sh(p)
        for l in range(3):
            assert np.abs(ours[l] - ref[l]).max() < 1e-12


def test_homogeneity_unnormalized(rng):
    """Y^l(c x) = c^l Y^l(x) in polynomial mode."""
    for _ in range(10):
        p = rng.standard_normal(3)
        c = rng.uniform(0.2, 3.0)
        lmax = 6
        base = sh_blocks(spherical_harmonics(lmax, p, normalize=False, normalization="norm"), lmax)
        scaled = sh_blocks(spherical_harmonics(lmax, c * p, normalize=False, normalization="norm"), lmax)
        for l in range(lmax + 1):
            assert np.abs(scaled[l] - c**l * base[l]).max() < 1e-10 * max(1.0, c**l)


def test_zero_vector_rejected():
    with pytest.raises(ValueError, match="zero"):
        spherical_harmonics(2, np.zeros(3), normalize=True)
    spherical_harmonics(2, np.zeros(3), normalize=False)  # polynomial mode is fine


@pytest.mark.parametrize("l", range(9))
def test_equivariance(l, rng):
    for _ in range(10):
        p = rng.standard_normal(3)
        a = rand_angles(rng)
        R = rot_matrix(a)
        lhs = spherical_harmonics(l, R @ p, normalization="norm")[..., l * l :]
        rhs = wigner_d(l, a) @ spherical_harmonics(l, p, normalization="norm")[..., l * l :]
        assert np.abs(lhs - rhs).max() < 1e-9


def test_equivariance_full_o3(rng):
    """Through the block representation, including inversion."""
    lmax = 4
    irreps = sh_irreps(lmax)
    for _ in range(10):
        p = rng.standard_normal(3)
        g = rand_o3(rng)
        Rp = (-1 if g.inversion else 1) * rot_matrix(g.rotation) @ p
        lhs = spherical_harmonics(lmax, Rp, normalization="component")
        rhs = irreps_matrix(irreps, g) @ spherical_harmonics(lmax, p, normalization="component")
        assert np.abs(lhs - rhs).max() < 1e-9


def test_parity(rng):
    lmax = 6
    p = rng.standard_normal(3)
    plus = sh_blocks(spherical_harmonics(lmax, p, normalization="norm"), lmax)
    minus = sh_blocks(spherical_harmonics(lmax, -p, normalization="norm"), lmax)
    for l in range(lmax + 1):
        assert np.abs(minus[l] - (-1) ** l * plus[l]).max() < 1e-12


@pytest.mark.parametrize("l", range(1, 9))
def test_stabilizer_annihilates(l, rng):
    """The generator of rotations about x itself kills Y^l(x)."""
    p = rng.standard_normal(3)
    p /= np.linalg.norm(p)
    y = spherical_harmonics(l, p, normalization="norm")[l * l :]
    assert np.abs(generator_about(l, p) @ y).max() < 1e-10


def test_norm_normalization(rng):
    lmax = 8
    p = rng.standard_normal(3)
    blocks = sh_blocks(spherical_harmonics(lmax, p, normalization="norm"), lmax)
    for b in blocks:
        assert abs(np.linalg.norm(b) - 1.0) < 1e-12


def test_component_normalization(rng):
    lmax = 5
    p = rng.standard_normal(3)
    blocks = sh_blocks(spherical_harmonics(lmax, p, normalization="component"), lmax)
    for l, b in enumerate(blocks):
        assert abs(np.sum(b**2) - (2 * l + 1)) < 1e-10


def test_integral_normalization_via_quadrature():
    lmax = 2
    grid = make_grid(2 * lmax + 1, 4 * lmax + 1, 2 * lmax)
    d = (lmax + 1) ** 2
    Y = grid.sh_values[..., :d]
    gram = np.einsum("k,kji,kjn->in", grid.quad_weights, Y, Y)
    assert np.abs(np.diag(gram) - 1.0).max() < 1e-10
    assert np.abs(gram[1, 4:]).max() < 1e-9  # cross terms l=1 vs l=2


def test_orthogonality_check():
    grid = make_grid(6, 11, 5)
    assert sh_orthogonality_check(5, grid) < 1e-9
    assert sh_orthogonality_check(2, grid) < 1e-9


def test_orthogonality_check_band_limit_guard():
    grid = make_grid(3, 5, 2)
    with pytest.raises(ValueError):
        sh_orthogonality_check(3, grid)


def test_batched_evaluation(rng):
    pts = rng.standard_normal((4, 5, 3))
    out = spherical_harmonics(3, pts, normalization="component")
    assert out.shape == (4, 5, 16)
    single = spherical_harmonics(3, pts[2, 3], normalization="component")
    assert np.allclose(out[2, 3], single)


@pytest.mark.parametrize("l", range(11))
def test_polynomial_dimension_counting(l):
    """Degree-l polynomial count equals the stacked harmonic dimensions."""
    n_poly = (l + 2) * (l + 1) // 2
    n_harm = sum(2 * (l - 2 * k) + 1 for k in range(l // 2 + 1))
    assert n_poly == n_harm


def test_bad_normalization_rejected():
    with pytest.raises(ValueError, match="normalization"):
        spherical_harmonics(1, np.ones(3), normalization="nope")


def test_sh_blocks_length_guard():
    with pytest.raises(ValueError, match="last dimension"):
        sh_blocks(np.zeros(7), 2)


def test_bad_point_shape_rejected():
    with pytest.raises(ValueError, match="shape"):
        spherical_harmonics(1, np.ones(4))
