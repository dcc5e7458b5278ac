r"""Equivariance property-test engine and point-cloud building blocks.

`assert_equivariant` drives a function with random inputs and random
O(3) elements (rotations and inversion) and reports the worst residual
of ``f(D_in(g) x) - D_out(g) f(x)``.  The remaining utilities are what
the worked equivariant-polynomial example needs: a radius graph, a
deterministic scatter-sum, activation rescaling and the
component-normalization statistic.
"""

import dataclasses
import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .irreps import Irreps
from .rotations import O3Element, irreps_matrix, rand_o3
from .spherical import spherical_harmonics
from .tensor_product import evaluate, fully_connected

__all__ = [
    "EquivarianceReport",
    "EquivarianceError",
    "check_equivariance",
    "assert_equivariant",
    "radius_graph",
    "scatter_sum",
    "EquivariantPolynomial",
    "polynomial_forward",
    "rescale_activation",
    "component_norm_check",
]


@dataclasses.dataclass(frozen=True)
class EquivarianceReport:
    """Worst-case equivariance residual over sampled group elements."""

    max_residual: float
    trials: int
    worst: O3Element
    residuals: Tuple[Tuple[O3Element, float], ...]


class EquivarianceError(AssertionError):
    """Raised when the residual exceeds the tolerance; carries the report."""

    def __init__(self, report: EquivarianceReport, tol: float):
        self.report = report
        super().__init__(
            f"equivariance residual {report.max_residual:.3e} exceeds tolerance {tol:.3e} "
            f"(worst element: angles={tuple(report.worst.rotation)}, inversion={report.worst.inversion})"
        )


def check_equivariance(
    f: Callable[..., np.ndarray],
    irreps_in: Sequence[Union[Irreps, str]],
    irreps_out: Union[Irreps, str],
    trials: int = 20,
    rng: Optional[np.random.Generator] = None,
) -> EquivarianceReport:
    """Sample random inputs and O(3) elements; never raises."""
    irreps_in = [Irreps(irr) for irr in irreps_in]
    irreps_out = Irreps(irreps_out)
    rng = rng if rng is not None else np.random.default_rng(0)
    residuals: List[Tuple[O3Element, float]] = []
    for _ in range(trials):
        g = rand_o3(rng)
        xs = [rng.standard_normal(irr.dim) for irr in irreps_in]
        d_in = [irreps_matrix(irr, g) for irr in irreps_in]
        d_out = irreps_matrix(irreps_out, g)
        lhs = f(*[D @ x for D, x in zip(d_in, xs)])
        rhs = d_out @ f(*xs)
        residuals.append((g, float(np.abs(lhs - rhs).max())))
    worst_g, worst_r = max(residuals, key=lambda t: t[1])
    return EquivarianceReport(worst_r, trials, worst_g, tuple(residuals))


def assert_equivariant(
    f: Callable[..., np.ndarray],
    irreps_in: Sequence[Union[Irreps, str]],
    irreps_out: Union[Irreps, str],
    trials: int = 20,
    tol: float = 1e-9,
    rng: Optional[np.random.Generator] = None,
) -> EquivarianceReport:
    """Like `check_equivariance` but raises `EquivarianceError` above ``tol``."""
    report = check_equivariance(f, irreps_in, irreps_out, trials=trials, rng=rng)
    if report.max_residual > tol:
        raise EquivarianceError(report, tol)
    return report


def radius_graph(positions: np.ndarray, r_max: float) -> Tuple[np.ndarray, np.ndarray]:
    """Directed edges for all ordered pairs with ``0 < distance < r_max``.

    Coincident points produce no edge.  Edge order is row-major in
    ``(source, destination)`` and therefore deterministic.
    """
    if r_max <= 0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    pos = np.asarray(positions, dtype=float)
    diff = pos[:, None, :] - pos[None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    src, dst = np.nonzero((r < r_max) & (r > 0))
    return src, dst


def scatter_sum(values: np.ndarray, index: np.ndarray, dim_size: int) -> np.ndarray:
    """Per-destination accumulation with a fixed (ascending-edge) sum order."""
    values = np.asarray(values)
    index = np.asarray(index)
    if index.ndim != 1 or len(index) != len(values):
        raise ValueError("index must be one entry per value row")
    if len(index) and (index.min() < 0 or index.max() >= dim_size):
        raise ValueError("destination index out of range")
    out = np.zeros((dim_size,) + values.shape[1:], dtype=float)
    np.add.at(out, index, values)
    return out


class EquivariantPolynomial:
    """Equivariant polynomial of a point cloud, built from two
    fully-connected tensor products on spherical-harmonic edge features.

    Satisfies, for any weights: rotation equivariance, translation
    invariance (features are built from coordinate differences only),
    and parity equivariance ``P({-x}) = D(-1) P({x})``.
    """

    SH_LMAX = 3
    IRREPS_MID = Irreps("64x0e + 24x1e + 24x1o + 16x2e + 16x2o")

    def __init__(self, irreps_out: Union[Irreps, str]):
        self.irreps_sh = Irreps.spherical_harmonics(self.SH_LMAX)
        self.irreps_out = Irreps(irreps_out)
        self.tp1 = fully_connected(self.irreps_sh, self.irreps_sh, self.IRREPS_MID)
        self.tp2 = fully_connected(self.IRREPS_MID, self.IRREPS_MID, self.irreps_out)

    @property
    def weight_numel(self) -> int:
        return self.tp1.weight_numel + self.tp2.weight_numel

    def forward(
        self,
        pos: np.ndarray,
        max_radius: float,
        num_neigh: float,
        num_nodes: float,
        weights: np.ndarray,
    ) -> np.ndarray:
        pos = np.asarray(pos, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] == 0:
            raise ValueError("pos must be a non-empty array of shape (n, 3)")
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.weight_numel,):
            raise ValueError(f"weights must have shape ({self.weight_numel},), got {weights.shape}")
        w1 = weights[: self.tp1.weight_numel]
        w2 = weights[self.tp1.weight_numel :]

        n = pos.shape[0]
        e_src, e_dst = radius_graph(pos, max_radius)
        e_x = spherical_harmonics(
            self.SH_LMAX,
            pos[e_src] - pos[e_dst],
            normalize=False,  # polynomials of the coordinates
            normalization="component",
        )
        n_x = scatter_sum(e_x, e_dst, n) / math.sqrt(num_neigh)
        e_x = evaluate(self.tp1, w1, n_x[e_src], e_x)
        n_x = scatter_sum(e_x, e_dst, n) / math.sqrt(num_neigh)
        e_x = evaluate(self.tp2, w2, n_x[e_src], e_x)
        return e_x.sum(axis=0) / math.sqrt(num_neigh) / math.sqrt(num_nodes)

    __call__ = forward


def polynomial_forward(
    pos: np.ndarray,
    max_radius: float,
    num_neigh: float,
    num_nodes: float,
    weights: np.ndarray,
    irreps_out: Union[Irreps, str] = "1x0e+1x1o+1x2e",
) -> np.ndarray:
    """One-shot evaluation of `EquivariantPolynomial`."""
    return EquivariantPolynomial(irreps_out).forward(pos, max_radius, num_neigh, num_nodes, weights)


@dataclasses.dataclass(frozen=True)
class ScaledActivation:
    """``c * phi`` with ``E[(c phi(Z))^2] = 1`` under a standard normal."""

    phi: Callable[[np.ndarray], np.ndarray]
    scale: float

    def __call__(self, x):
        return self.scale * self.phi(x)


def rescale_activation(phi: Callable[[np.ndarray], np.ndarray], nodes: int = 64) -> ScaledActivation:
    """Rescale a scalar activation to unit second moment under N(0, 1).

    The expectation is computed by Gauss-Hermite quadrature with at least
    64 nodes.  Raises ``ValueError`` for the (almost-everywhere) zero
    function.
    """
    t, w = np.polynomial.hermite.hermgauss(max(nodes, 64))
    second_moment = float(np.sum(w * np.asarray(phi(math.sqrt(2.0) * t)) ** 2) / math.sqrt(math.pi))
    if second_moment < 1e-30:
        raise ValueError("activation is zero under the Gaussian; cannot rescale")
    return ScaledActivation(phi, second_moment ** -0.5)


def component_norm_check(samples: np.ndarray, irreps: Union[Irreps, str]) -> float:
    """Mean of ``||x||^2 / d`` over a batch; close to 1 for
    component-normalized data."""
    irreps = Irreps(irreps)
    samples = np.asarray(samples, dtype=float)
    if samples.shape[-1] != irreps.dim:
        raise ValueError(f"samples have dimension {samples.shape[-1]}, irreps say {irreps.dim}")
    return float(np.mean(np.sum(samples**2, axis=-1)) / irreps.dim)
