r"""Rotation parametrizations and real Wigner D matrices for :math:`O(3)`.

Conventions fixed by this library:

* Euler angles ``(alpha, beta, gamma)`` compose as rotation about the
  **y** axis by ``gamma``, then **x** by ``beta``, then **y** by
  ``alpha`` (matrices multiply left to right as written, so ``gamma``
  is applied first to a column vector).
* The complex irrep basis diagonalizes the generator of rotations about
  the y axis; the real basis is obtained from it with the unitary
  change of basis of `complex_to_real`.
* In the resulting real basis the ``l = 1`` Wigner matrix **equals** the
  3x3 rotation matrix: vectors need no component permutation.  Against
  textbook tables of real spherical harmonics (polar axis z) our three
  components read the functions ``(y, z, x)``.
"""

import math
from functools import lru_cache
from typing import NamedTuple, Tuple, Union

import numpy as np

from .irreps import Irrep, Irreps

__all__ = [
    "EulerAngles",
    "O3Element",
    "Generators",
    "rot_matrix",
    "matrix_to_angles",
    "compose",
    "rand_angles",
    "rand_o3",
    "identity_o3",
    "inversion_o3",
    "complex_to_real",
    "generators",
    "generator_about",
    "wigner_d",
    "d_o3",
    "irreps_matrix",
]


class EulerAngles(NamedTuple):
    """Y-X-Y Euler angles in radians."""

    alpha: float
    beta: float
    gamma: float


class O3Element(NamedTuple):
    """A rotation together with an optional inversion (they commute)."""

    rotation: EulerAngles
    inversion: bool = False


class Generators(NamedTuple):
    """Real antisymmetric generators of rotations about x, y, z."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray


IntoAngles = Union[EulerAngles, Tuple[float, float, float]]


def _rot_y(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rot_x(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_matrix(angles: IntoAngles) -> np.ndarray:
    """3x3 rotation matrix ``R_y(alpha) R_x(beta) R_y(gamma)``."""
    alpha, beta, gamma = angles
    return _rot_y(alpha) @ _rot_x(beta) @ _rot_y(gamma)


def matrix_to_angles(R: np.ndarray) -> EulerAngles:
    """Euler angles of a rotation matrix (inverse of `rot_matrix`).

    ``beta`` lands in ``[0, pi]``; ``alpha`` and ``gamma`` in ``(-pi, pi]``.
    At the gimbal shared axis (``beta`` 0 or pi) alpha is set to 0.
    """
    R = np.asarray(R, dtype=float)
    v = R @ np.array([0.0, 1.0, 0.0])
    beta = math.acos(min(1.0, max(-1.0, v[1])))
    alpha = math.atan2(v[0], v[2]) if abs(v[0]) > 1e-14 or abs(v[2]) > 1e-14 else 0.0
    M = (_rot_y(alpha) @ _rot_x(beta)).T @ R  # residual rotation about y
    gamma = math.atan2(M[0, 2], M[0, 0])
    return EulerAngles(alpha, beta, gamma)


def identity_o3() -> O3Element:
    return O3Element(EulerAngles(0.0, 0.0, 0.0), False)


def inversion_o3() -> O3Element:
    """The pure coordinate inversion ``x -> -x``."""
    return O3Element(EulerAngles(0.0, 0.0, 0.0), True)


def compose(g1: O3Element, g2: O3Element) -> O3Element:
    """Group composition ``g1 * g2`` (``g2`` acts first)."""
    R = rot_matrix(g1.rotation) @ rot_matrix(g2.rotation)
    return O3Element(matrix_to_angles(R), g1.inversion != g2.inversion)


def rand_angles(rng: np.random.Generator) -> EulerAngles:
    """Haar-distributed rotation: ``cos(beta)`` uniform on [-1, 1]."""
    alpha = rng.uniform(0.0, 2.0 * math.pi)
    gamma = rng.uniform(0.0, 2.0 * math.pi)
    beta = math.acos(rng.uniform(-1.0, 1.0))
    return EulerAngles(alpha, beta, gamma)


def rand_o3(rng: np.random.Generator) -> O3Element:
    """Haar-distributed element of :math:`O(3)` (inversion is a fair coin)."""
    return O3Element(rand_angles(rng), bool(rng.integers(0, 2)))


def complex_to_real(l: int) -> np.ndarray:
    r"""Unitary matrix expressing the complex basis in the real one.

    Row ``m`` (offset by ``l``) holds the coefficients of the complex
    basis vector :math:`z^l_m` on the real basis :math:`x^l_{m'}`:

    .. math::
        z^l_m = \begin{cases}
            (-i)^l \tfrac1{\sqrt2}\,(x^l_{|m|} - i\, x^l_{-|m|}) & m < 0 \\
            (-i)^l \, x^l_0 & m = 0 \\
            (-1)^m (-i)^l \tfrac1{\sqrt2}\,(x^l_{|m|} + i\, x^l_{-|m|}) & m > 0
        \end{cases}
    """
    if l < 0:
        raise ValueError(f"l must be >= 0, got {l}")
    A = np.zeros((2 * l + 1, 2 * l + 1), dtype=complex)
    phase = (-1j) ** l
    for m in range(-l, l + 1):
        if m < 0:
            A[m + l, abs(m) + l] = phase / math.sqrt(2)
            A[m + l, -abs(m) + l] = -1j * phase / math.sqrt(2)
        elif m == 0:
            A[l, l] = phase
        else:
            A[m + l, m + l] = (-1) ** m * phase / math.sqrt(2)
            A[m + l, -m + l] = (-1) ** m * 1j * phase / math.sqrt(2)
    A.setflags(write=False)
    return A


def _su2_generators(l: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Anti-Hermitian complex generators from the ladder construction.

    Basis ``m = -l..l`` with the third generator diagonal.
    """
    m = np.arange(-l, l + 1)
    raising = np.zeros((2 * l + 1, 2 * l + 1), dtype=complex)
    for mm in range(-l, l):
        raising[mm + 1 + l, mm + l] = math.sqrt(l * (l + 1) - mm * (mm + 1))
    lowering = raising.conj().T
    Jx = (raising + lowering) / 2.0
    Jy = (raising - lowering) / 2.0j
    Jz = np.diag(m).astype(complex)
    return -1j * Jx, -1j * Jy, -1j * Jz


@lru_cache(maxsize=None)
def generators(l: int) -> Generators:
    """Real antisymmetric generators of the ``l``-irrep.

    Built from the complex ladder construction conjugated by
    `complex_to_real`.  The axes are labelled so that the generator
    that is diagonal in the complex basis is ``y`` and the ``l = 1``
    triple equals the spatial rotation generators.
    """
    if l < 0:
        raise ValueError(f"l must be >= 0, got {l}")
    Xc, Yc, Zc = _su2_generators(l)
    A = complex_to_real(l)
    conj = lambda X: np.real(A.conj().T @ X @ A)
    Jx, Jy, Jz = conj(Yc), -conj(Zc), -conj(Xc)
    for J in (Jx, Jy, Jz):
        J.setflags(write=False)
    return Generators(Jx, Jy, Jz)


def generator_about(l: int, axis: np.ndarray) -> np.ndarray:
    """Generator of rotations about an arbitrary axis (not normalized here)."""
    a = np.asarray(axis, dtype=float)
    g = generators(l)
    return a[0] * g.x + a[1] * g.y + a[2] * g.z


@lru_cache(maxsize=None)
def _eig_generators(l: int):
    """Unitary diagonalizations of J_y and J_x, cached per l."""
    g = generators(l)
    wy, Vy = np.linalg.eigh(-1j * g.y)
    wx, Vx = np.linalg.eigh(-1j * g.x)
    for a in (wy, Vy, wx, Vx):
        a.setflags(write=False)
    return wy, Vy, wx, Vx


def _exp_from_eig(w: np.ndarray, V: np.ndarray, theta: float) -> np.ndarray:
    return (V * np.exp(1j * theta * w)) @ V.conj().T


def wigner_d(l: int, angles: IntoAngles) -> np.ndarray:
    r"""Real orthogonal Wigner matrix :math:`D^l` of a rotation.

    ``D^l(angles) = exp(alpha J_y) exp(beta J_x) exp(gamma J_y)``, computed
    by unitary diagonalization of the antisymmetric generators (exact for
    this structure).  ``wigner_d(1, angles)`` equals `rot_matrix`.
    """
    alpha, beta, gamma = angles
    wy, Vy, wx, Vx = _eig_generators(l)
    D = (
        _exp_from_eig(wy, Vy, alpha)
        @ _exp_from_eig(wx, Vx, beta)
        @ _exp_from_eig(wy, Vy, gamma)
    )
    return np.real(D)


def d_o3(ir: Irrep, g: O3Element) -> np.ndarray:
    """Representation matrix of an O(3) element on one irrep."""
    ir = Irrep(ir)
    D = wigner_d(ir.l, g.rotation)
    if g.inversion:
        D = ir.p * D
    return D


def irreps_matrix(irreps: Irreps, g: O3Element) -> np.ndarray:
    """Block-diagonal representation matrix on a direct sum of irreps."""
    irreps = Irreps(irreps)
    M = np.zeros((irreps.dim, irreps.dim))
    offset = 0
    for mul, ir in irreps:
        D = d_o3(ir, g)
        for _ in range(mul):
            M[offset : offset + ir.dim, offset : offset + ir.dim] = D
            offset += ir.dim
    return M
