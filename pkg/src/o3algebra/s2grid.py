r"""Transforms between irrep coefficients and scalar signals on the sphere.

A band-limited scalar field ``f = sum_l v^l . Y^l`` is represented either
by its coefficient vector (``(L+1)**2`` entries, ``integral``
normalization fixed throughout) or by samples on a grid of necklaces
around the **y** axis: rings of equally spaced azimuths at polar angles
chosen as Gauss-Legendre nodes in ``cos(beta)``.  Gauss-Legendre makes
the quadrature exact for the products appearing in the analysis
integrals with the minimal ring count ``res_beta = L + 1``; the uniform
azimuth rule is exact for Fourier modes up to ``res_alpha - 1``, hence
``res_alpha = 2L + 1`` suffices.

Transforms are dense einsum contractions against precomputed harmonic
values; an FFT along the azimuth would be a performance extension.
"""

import dataclasses
import math

import numpy as np

from .spherical import spherical_harmonics

__all__ = ["S2Grid", "make_grid", "to_grid", "from_grid"]


@dataclasses.dataclass(frozen=True)
class S2Grid:
    """Sphere sampling grid with quadrature exact up to band limit ``lmax``.

    ``quad_weights[k]`` is the integration weight of **each** point on
    ring ``k`` (the ``2 pi / res_alpha`` azimuth factor is included), so
    ``sum_k quad_weights[k] * res_alpha = 4 pi``.
    """

    res_beta: int
    res_alpha: int
    lmax: int
    betas: np.ndarray
    alphas: np.ndarray
    quad_weights: np.ndarray
    points: np.ndarray
    sh_values: np.ndarray

    def __post_init__(self):
        for a in (self.betas, self.alphas, self.quad_weights, self.points, self.sh_values):
            a.setflags(write=False)


def make_grid(res_beta: int, res_alpha: int, lmax: int) -> S2Grid:
    """Build a grid supporting exact transforms up to band limit ``lmax``.

    Raises ``ValueError`` when a resolution is below the Nyquist-like
    minimum (``res_beta >= lmax + 1``, ``res_alpha >= 2 lmax + 1``).
    """
    if lmax < 0:
        raise ValueError(f"lmax must be >= 0, got {lmax}")
    if res_beta < lmax + 1:
        raise ValueError(f"res_beta={res_beta} is too small for band limit {lmax}; minimum is {lmax + 1}")
    if res_alpha < 2 * lmax + 1:
        raise ValueError(f"res_alpha={res_alpha} is too small for band limit {lmax}; minimum is {2 * lmax + 1}")
    nodes, gl_weights = np.polynomial.legendre.leggauss(res_beta)
    betas = np.arccos(nodes)[::-1].copy()  # ascending beta, i.e. from the +y pole
    ring_weights = gl_weights[::-1] * (2.0 * math.pi / res_alpha)
    alphas = 2.0 * math.pi * np.arange(res_alpha) / res_alpha
    sin_b, cos_b = np.sin(betas), np.cos(betas)
    sin_a, cos_a = np.sin(alphas), np.cos(alphas)
    # necklaces around the y axis; azimuth measured from +z toward +x
    points = np.stack(
        [
            sin_b[:, None] * sin_a[None, :],
            cos_b[:, None] * np.ones_like(sin_a)[None, :],
            sin_b[:, None] * cos_a[None, :],
        ],
        axis=-1,
    )
    sh_values = spherical_harmonics(lmax, points, normalize=True, normalization="integral")
    return S2Grid(
        res_beta=res_beta,
        res_alpha=res_alpha,
        lmax=lmax,
        betas=betas,
        alphas=alphas,
        quad_weights=ring_weights,
        points=points,
        sh_values=sh_values,
    )


def _signal_lmax(dim: int) -> int:
    lmax = int(round(math.sqrt(dim))) - 1
    if (lmax + 1) ** 2 != dim:
        raise ValueError(f"coefficient vector length {dim} is not a perfect square (L+1)**2")
    return lmax


def to_grid(coeffs: np.ndarray, grid: S2Grid) -> np.ndarray:
    """Evaluate the expansion pointwise: ``(..., res_beta, res_alpha)``."""
    coeffs = np.asarray(coeffs, dtype=float)
    lmax = _signal_lmax(coeffs.shape[-1])
    if lmax > grid.lmax:
        raise ValueError(f"signal band limit {lmax} exceeds grid band limit {grid.lmax}")
    return np.einsum("...i,kji->...kj", coeffs, grid.sh_values[..., : coeffs.shape[-1]])


def from_grid(samples: np.ndarray, grid: S2Grid, lmax: int) -> np.ndarray:
    """Quadrature inner products with ``Y^l_m``: exact inverse of `to_grid`
    on signals band-limited to the grid."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[-2:] != (grid.res_beta, grid.res_alpha):
        raise ValueError(
            f"samples must have shape (..., {grid.res_beta}, {grid.res_alpha}), got {samples.shape}"
        )
    if lmax > grid.lmax:
        raise ValueError(f"requested band limit {lmax} exceeds grid band limit {grid.lmax}")
    d = (lmax + 1) ** 2
    return np.einsum("k,kji,...kj->...i", grid.quad_weights, grid.sh_values[..., :d], samples)
