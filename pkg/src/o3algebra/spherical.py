r"""Real spherical harmonics on :math:`\mathbb{R}^3`.

``Y^0`` is the constant, ``Y^1`` is the identity on vectors, and each
``Y^{l+1}`` is obtained by contracting ``Y^l (x) Y^1`` with the
Clebsch-Gordan tensor and rescaling, so correctness is entailed by the
CG tensors rather than hard-coded polynomial tables.  Each ``Y^l`` is an
equivariant homogeneous polynomial of degree ``l``; with
``normalize=True`` the input is first mapped to the unit sphere.

Normalizations on the unit sphere:

* ``"norm"``:      ``||Y^l(x)|| = 1``
* ``"component"``: ``||Y^l(x)||^2 = 2l + 1``
* ``"integral"``:  ``\int_{S^2} Y^l_m(x)^2 dx = 1``
"""

import math
from functools import lru_cache
from typing import List

import numpy as np

from .cg import wigner_3j

__all__ = ["NORMALIZATIONS", "spherical_harmonics", "sh_blocks", "sh_orthogonality_check"]

NORMALIZATIONS = ("norm", "component", "integral")

# generic unit reference point used to fix the per-l recursion scales
_REF_POINT = np.array([2.0 / 7.0, 3.0 / 7.0, 6.0 / 7.0])


@lru_cache(maxsize=None)
def _recursion_scales(lmax: int) -> tuple:
    """Per-l constants making the recursion unit-norm on the sphere.

    The norm of the raw contraction is rotation invariant, hence constant
    over the sphere; evaluating at one reference point fixes it.
    """
    scales = [1.0, 1.0]
    y_prev = _REF_POINT
    for l in range(2, lmax + 1):
        raw = np.einsum("kij,i,j->k", wigner_3j(l, l - 1, 1), y_prev, _REF_POINT)
        s = 1.0 / np.linalg.norm(raw)
        scales.append(s)
        y_prev = raw * s
    return tuple(scales[: lmax + 1])


def _sh_stack(lmax: int, pts: np.ndarray) -> List[np.ndarray]:
    """Unit-norm-convention blocks [Y^0, ..., Y^lmax], batched."""
    scales = _recursion_scales(lmax)
    ys = [np.ones(pts.shape[:-1] + (1,))]
    if lmax >= 1:
        ys.append(pts)
    for l in range(2, lmax + 1):
        raw = np.einsum("kij,...i,...j->...k", wigner_3j(l, l - 1, 1), ys[l - 1], pts)
        ys.append(raw * scales[l])
    return ys


def spherical_harmonics(
    lmax: int,
    points: np.ndarray,
    normalize: bool = True,
    normalization: str = "integral",
) -> np.ndarray:
    """Evaluate ``Y^0 .. Y^lmax`` on points of :math:`\\mathbb{R}^3`.

    Args:
        lmax: maximum rotation order, >= 0.
        points: array of shape ``(..., 3)``.
        normalize: project points onto the unit sphere first.  With
            ``False`` the harmonics are evaluated as homogeneous
            polynomials, ``Y^l(c x) = c^l Y^l(x)``.
        normalization: one of ``"norm"``, ``"component"``, ``"integral"``.

    Returns:
        Array of shape ``(..., (lmax+1)**2)``; block ``l`` occupies
        columns ``l*l : (l+1)**2``.

    Raises:
        ValueError: on a zero vector with ``normalize=True`` (no
            equivariant continuous extension exists at the origin).
    """
    if lmax < 0:
        raise ValueError(f"lmax must be >= 0, got {lmax}")
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}, expected one of {NORMALIZATIONS}")
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1] != 3:
        raise ValueError(f"points must have shape (..., 3), got {pts.shape}")
    if normalize:
        norms = np.linalg.norm(pts, axis=-1, keepdims=True)
        if np.any(norms == 0.0):
            raise ValueError("cannot normalize a zero vector onto the sphere")
        pts = pts / norms
    ys = _sh_stack(lmax, pts)
    if normalization == "component":
        ys = [y * math.sqrt(2 * l + 1) for l, y in enumerate(ys)]
    elif normalization == "integral":
        ys = [y * math.sqrt((2 * l + 1) / (4.0 * math.pi)) for l, y in enumerate(ys)]
    return np.concatenate(ys, axis=-1)


def sh_blocks(values: np.ndarray, lmax: int) -> List[np.ndarray]:
    """Split a concatenated output into its per-l blocks."""
    if values.shape[-1] != (lmax + 1) ** 2:
        raise ValueError(f"expected last dimension {(lmax + 1) ** 2}, got {values.shape[-1]}")
    return [values[..., l * l : (l + 1) ** 2] for l in range(lmax + 1)]


def sh_orthogonality_check(lmax: int, grid) -> float:
    """Max deviation of quadrature inner products from orthonormality.

    Uses ``integral`` normalization, for which
    ``<Y^l_m, Y^l'_m'> = delta delta`` on the sphere.  The grid must be
    exact for products of band limit ``lmax``, i.e. ``grid.lmax >= lmax``.
    """
    if grid.lmax < lmax:
        raise ValueError(f"grid supports band limit {grid.lmax}, need at least {lmax}")
    d = (lmax + 1) ** 2
    Y = grid.sh_values[..., :d]
    gram = np.einsum("k,kji,kjn->in", grid.quad_weights, Y, Y)
    return float(np.abs(gram - np.eye(d)).max())
