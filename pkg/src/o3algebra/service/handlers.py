"""Computation behind each endpoint, shared by the HTTP app and the CLI.

Handlers take a request model and return a response model; domain
problems surface as ``ValueError`` for the caller to translate (HTTP
400 for the app, usage error for the CLI).
"""

import numpy as np

from .. import __version__
from ..cg import wigner_3j
from ..harness import check_equivariance
from ..reduction import parse_formula, reduce_tensor
from ..rotations import EulerAngles, wigner_d
from ..s2grid import from_grid, make_grid, to_grid
from ..spherical import sh_blocks, spherical_harmonics
from ..tensor_product import TensorProductSpec, evaluate
from . import models


def health() -> models.HealthResponse:
    return models.HealthResponse(status="ok", version=__version__)


def wigner(req: models.WignerRequest) -> models.WignerResponse:
    D = wigner_d(req.l, EulerAngles(*req.angles))
    return models.WignerResponse(l=req.l, angles=req.angles, matrix=D.tolist())


def cg(req: models.CGRequest) -> models.CGResponse:
    C = wigner_3j(req.l1, req.l2, req.l3)
    return models.CGResponse(
        l1=req.l1, l2=req.l2, l3=req.l3, shape=C.shape, values=C.tolist()
    )


def sh(req: models.SHRequest) -> models.SHResponse:
    values = spherical_harmonics(
        req.lmax, np.array(req.point), normalize=req.normalize, normalization=req.normalization
    )
    return models.SHResponse(
        lmax=req.lmax,
        normalize=req.normalize,
        normalization=req.normalization,
        values=values.tolist(),
        blocks=[b.tolist() for b in sh_blocks(values, req.lmax)],
    )


def reduce(req: models.ReduceRequest) -> models.ReduceResponse:
    formula = parse_formula(req.formula)
    basis = reduce_tensor(formula, **req.irreps)
    return models.ReduceResponse(
        formula=req.formula,
        irreps_out=repr(basis.irreps_out),
        dim=basis.dim,
        space_dim=basis.Q.shape[1],
        group_order=formula.order,
        basis=basis.Q.tolist() if req.include_basis else None,
    )


def spec_from_model(model: models.TensorProductSpecModel) -> TensorProductSpec:
    return TensorProductSpec.from_dict(model.model_dump())


def spec_to_model(spec: TensorProductSpec) -> models.TensorProductSpecModel:
    return models.TensorProductSpecModel.model_validate(spec.to_dict())


def tp_info(req: models.TPInfoRequest) -> models.TPInfoResponse:
    spec = spec_from_model(req.spec)
    table = []
    for ins in spec.instructions:
        m1, ir1 = spec.irreps_in1[ins.i_in1]
        m2, ir2 = spec.irreps_in2[ins.i_in2]
        mo, iro = spec.irreps_out[ins.i_out]
        n_weights = int(np.prod(spec.weight_shape(ins))) if ins.has_weight else 0
        table.append(
            models.PathRow(
                i_in1=ins.i_in1,
                i_in2=ins.i_in2,
                i_out=ins.i_out,
                ir_in1=f"{m1}x{ir1}",
                ir_in2=f"{m2}x{ir2}",
                ir_out=f"{mo}x{iro}",
                mode=ins.mode,
                has_weight=ins.has_weight,
                num_weights=n_weights,
                path_weight=ins.path_weight,
            )
        )
    return models.TPInfoResponse(
        irreps_in1=repr(spec.irreps_in1),
        irreps_in2=repr(spec.irreps_in2),
        irreps_out=repr(spec.irreps_out),
        paths=spec.num_paths,
        weight_numel=spec.weight_numel,
        table=table,
    )


def _tp_equivariance_residual(spec: TensorProductSpec, trials: int, rng: np.random.Generator) -> float:
    weights = rng.standard_normal(spec.weight_numel)
    report = check_equivariance(
        lambda x1, x2: evaluate(spec, weights, x1, x2),
        [spec.irreps_in1, spec.irreps_in2],
        spec.irreps_out,
        trials=trials,
        rng=rng,
    )
    return report.max_residual


def _tp_bilinearity_residual(spec: TensorProductSpec, trials: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(trials):
        w = rng.standard_normal(spec.weight_numel)
        x1, y1 = rng.standard_normal((2, spec.irreps_in1.dim))
        x2, y2 = rng.standard_normal((2, spec.irreps_in2.dim))
        a, b = rng.standard_normal(2)
        left = evaluate(spec, w, a * x1 + b * y1, x2) - (
            a * evaluate(spec, w, x1, x2) + b * evaluate(spec, w, y1, x2)
        )
        right = evaluate(spec, w, x1, a * x2 + b * y2) - (
            a * evaluate(spec, w, x1, x2) + b * evaluate(spec, w, x1, y2)
        )
        worst = max(worst, float(np.abs(left).max()), float(np.abs(right).max()))
    return worst


def tp_check(req: models.TPCheckRequest) -> models.TPCheckResponse:
    spec = spec_from_model(req.spec)
    rng = np.random.default_rng(req.seed)
    equi = _tp_equivariance_residual(spec, req.trials, rng)
    bilin = _tp_bilinearity_residual(spec, req.trials, rng)
    return models.TPCheckResponse(
        passed=equi <= req.tol and bilin <= req.tol,
        trials=req.trials,
        tol=req.tol,
        equivariance_residual=equi,
        bilinearity_residual=bilin,
    )


def s2_roundtrip(req: models.S2RoundtripRequest) -> models.S2RoundtripResponse:
    grid = make_grid(req.res_beta, req.res_alpha, req.lmax)
    rng = np.random.default_rng(req.seed)
    worst_rt = worst_parseval = 0.0
    for _ in range(req.trials):
        coeffs = rng.standard_normal((req.lmax + 1) ** 2)
        samples = to_grid(coeffs, grid)
        back = from_grid(samples, grid, req.lmax)
        worst_rt = max(worst_rt, float(np.abs(back - coeffs).max()))
        power = float(np.einsum("k,kj->", grid.quad_weights, samples**2))
        worst_parseval = max(worst_parseval, abs(power - float(coeffs @ coeffs)))
    return models.S2RoundtripResponse(
        passed=worst_rt <= req.tol,
        lmax=req.lmax,
        res_beta=req.res_beta,
        res_alpha=req.res_alpha,
        tol=req.tol,
        max_roundtrip_error=worst_rt,
        parseval_error=worst_parseval,
    )


def equivariance_check(req: models.EquivarianceCheckRequest) -> models.EquivarianceCheckResponse:
    spec = spec_from_model(req.spec)
    rng = np.random.default_rng(req.seed)
    weights = rng.standard_normal(spec.weight_numel)
    report = check_equivariance(
        lambda x1, x2: evaluate(spec, weights, x1, x2),
        [spec.irreps_in1, spec.irreps_in2],
        spec.irreps_out,
        trials=req.trials,
        rng=rng,
    )
    return models.EquivarianceCheckResponse(
        passed=report.max_residual <= req.tol,
        trials=req.trials,
        tol=req.tol,
        max_residual=report.max_residual,
        worst_angles=tuple(report.worst.rotation),
        worst_inversion=report.worst.inversion,
    )
