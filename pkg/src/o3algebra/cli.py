"""Command-line client of the verification service.

Every subcommand builds the same request model the HTTP service accepts
and renders the response model.  By default the handler runs in-process;
with ``--server URL`` the request is sent to a running service instead.

Exit codes: 0 ok, 1 verification failure, 2 usage error.  Text output
prints numbers with 12 significant digits; values below 1e-12 in
magnitude print as 0.
"""

import json
import pathlib
from typing import Optional, Tuple

import click
import httpx

from .service import handlers, models

_ZERO_EPS = 1e-12


def _fmt(v: float) -> str:
    return "0" if abs(v) < _ZERO_EPS else f"{v:.12g}"


def _parse_triple(text: str, what: str) -> Tuple[float, float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise click.UsageError(f"{what} must be three comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise click.UsageError(f"{what} must be three comma-separated numbers, got {text!r}")


def _load_spec_model(path: str) -> models.TensorProductSpecModel:
    try:
        data = json.loads(pathlib.Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read spec file {path}: {exc}")
    try:
        return models.TensorProductSpecModel.model_validate(data)
    except Exception as exc:
        raise click.UsageError(f"invalid tensor product spec in {path}: {exc}")


def _call(ctx, handler, path: str, request, response_cls):
    """Run a handler in-process, or against ``--server`` over HTTP."""
    server: Optional[str] = ctx.obj.get("server")
    if server is None:
        try:
            return handler(request)
        except ValueError as exc:
            raise click.UsageError(str(exc))
    url = server.rstrip("/") + path
    try:
        resp = httpx.post(url, json=request.model_dump(), timeout=600.0)
    except httpx.HTTPError as exc:
        raise click.ClickException(f"cannot reach {url}: {exc}")
    if resp.status_code in (400, 422):
        detail = resp.json().get("detail", resp.text)
        raise click.UsageError(f"{detail}")
    if resp.status_code != 200:
        raise click.ClickException(f"{url} returned {resp.status_code}: {resp.text}")
    return response_cls.model_validate(resp.json())


def _emit(ctx, response, text_renderer) -> None:
    if ctx.obj.get("json"):
        click.echo(response.model_dump_json(indent=2))
    else:
        for line in text_renderer(response):
            click.echo(line)


@click.group()
@click.option("--server", metavar="URL", default=None, help="Send requests to a running service instead of computing in-process.")
@click.option("--json", "json_output", is_flag=True, help="Emit machine-readable JSON responses.")
@click.pass_context
def main(ctx, server, json_output):
    """O(3)-equivariant tensor algebra toolbox."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server
    ctx.obj["json"] = json_output


@main.command()
@click.option("--l", "l", type=int, required=True, help="Rotation order.")
@click.option("--angles", required=True, metavar="A,B,C", help="Y-X-Y Euler angles in radians.")
@click.pass_context
def wigner(ctx, l, angles):
    """Print the real Wigner D matrix of a rotation."""
    req = models.WignerRequest(l=l, angles=_parse_triple(angles, "--angles"))
    resp = _call(ctx, handlers.wigner, "/wigner", req, models.WignerResponse)
    _emit(ctx, resp, lambda r: [" ".join(_fmt(v) for v in row) for row in r.matrix])


@main.command()
@click.argument("l1", type=int)
@click.argument("l2", type=int)
@click.argument("l3", type=int)
@click.pass_context
def cg(ctx, l1, l2, l3):
    """Print the dense Clebsch-Gordan tensor, one (i, j, k, value) per line."""
    req = models.CGRequest(l1=l1, l2=l2, l3=l3)
    resp = _call(ctx, handlers.cg, "/cg", req, models.CGResponse)

    def render(r):
        for i, plane in enumerate(r.values):
            for j, row in enumerate(plane):
                for k, v in enumerate(row):
                    yield f"{i} {j} {k} {_fmt(v)}"

    _emit(ctx, resp, render)


@main.command()
@click.option("--lmax", type=int, required=True)
@click.option("--point", required=True, metavar="X,Y,Z")
@click.option("--no-normalize", "no_normalize", is_flag=True, help="Evaluate the homogeneous polynomials of the raw point.")
@click.option("--normalization", type=click.Choice(["norm", "component", "integral"]), default="integral", show_default=True)
@click.pass_context
def sh(ctx, lmax, point, no_normalize, normalization):
    """Evaluate the spherical harmonics at a point."""
    req = models.SHRequest(
        lmax=lmax,
        point=_parse_triple(point, "--point"),
        normalize=not no_normalize,
        normalization=normalization,
    )
    resp = _call(ctx, handlers.sh, "/sh", req, models.SHResponse)
    _emit(ctx, resp, lambda r: [f"l={l}: " + " ".join(_fmt(v) for v in block) for l, block in enumerate(r.blocks)])


@main.command()
@click.argument("formula")
@click.option("-i", "--index", "indices", multiple=True, metavar="LETTER=IRREPS", help="Irreps carried by an index, e.g. i=1o (repeatable).")
@click.option("--basis", "include_basis", is_flag=True, help="Also dump the rows of the change of basis Q.")
@click.pass_context
def reduce(ctx, formula, indices, include_basis):
    """Reduce an index-symmetrized tensor space onto irreps."""
    irreps = {}
    for item in indices:
        if "=" not in item:
            raise click.UsageError(f"--index takes LETTER=IRREPS, got {item!r}")
        letter, _, irr = item.partition("=")
        irreps[letter.strip()] = irr.strip()
    req = models.ReduceRequest(formula=formula, irreps=irreps, include_basis=include_basis)
    resp = _call(ctx, handlers.reduce, "/reduce", req, models.ReduceResponse)

    def render(r):
        yield r.irreps_out
        if r.basis is not None:
            for row in r.basis:
                yield " ".join(_fmt(v) for v in row)

    _emit(ctx, resp, render)


@main.command(name="tp-info")
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def tp_info(ctx, spec_file):
    """Print the path table and weight count of a tensor product spec."""
    req = models.TPInfoRequest(spec=_load_spec_model(spec_file))
    resp = _call(ctx, handlers.tp_info, "/tp/info", req, models.TPInfoResponse)

    def render(r):
        yield f"paths: {r.paths}, weights: {r.weight_numel}"
        for row in r.table:
            yield (
                f"  {row.ir_in1} (x) {row.ir_in2} -> {row.ir_out}"
                f"  mode={row.mode} weights={row.num_weights} path_weight={_fmt(row.path_weight)}"
            )

    _emit(ctx, resp, render)


@main.command(name="tp-check")
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def tp_check(ctx, spec_file, trials, tol, seed):
    """Run the equivariance and bilinearity suite on a tensor product spec."""
    req = models.TPCheckRequest(spec=_load_spec_model(spec_file), trials=trials, tol=tol, seed=seed)
    resp = _call(ctx, handlers.tp_check, "/tp/check", req, models.TPCheckResponse)

    def render(r):
        yield f"equivariance residual: {_fmt(r.equivariance_residual)}"
        yield f"bilinearity residual: {_fmt(r.bilinearity_residual)}"
        yield "PASS" if r.passed else "FAIL"

    _emit(ctx, resp, render)
    if not resp.passed:
        ctx.exit(1)


@main.group()
def s2():
    """Sphere-grid transforms."""


@s2.command()
@click.option("--L", "lmax", type=int, required=True, help="Band limit.")
@click.option("--res-beta", type=int, required=True)
@click.option("--res-alpha", type=int, required=True)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def roundtrip(ctx, lmax, res_beta, res_alpha, trials, tol, seed):
    """Measure the coefficients -> grid -> coefficients round-trip error."""
    req = models.S2RoundtripRequest(
        lmax=lmax, res_beta=res_beta, res_alpha=res_alpha, trials=trials, tol=tol, seed=seed
    )
    resp = _call(ctx, handlers.s2_roundtrip, "/s2/roundtrip", req, models.S2RoundtripResponse)

    def render(r):
        yield f"max round-trip error: {_fmt(r.max_roundtrip_error)}"
        yield f"parseval error: {_fmt(r.parseval_error)}"
        yield "PASS" if r.passed else "FAIL"

    _emit(ctx, resp, render)
    if not resp.passed:
        ctx.exit(1)


@main.command(name="check-equivariance")
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def check_equivariance_cmd(ctx, spec_file, trials, tol, seed):
    """Check a tensor product spec against random O(3) elements."""
    req = models.EquivarianceCheckRequest(spec=_load_spec_model(spec_file), trials=trials, tol=tol, seed=seed)
    resp = _call(ctx, handlers.equivariance_check, "/equivariance/check", req, models.EquivarianceCheckResponse)

    def render(r):
        yield f"max residual: {_fmt(r.max_residual)} over {r.trials} trials (tol {_fmt(r.tol)})"
        if not r.passed:
            yield (
                f"worst element: angles=({_fmt(r.worst_angles[0])}, {_fmt(r.worst_angles[1])}, "
                f"{_fmt(r.worst_angles[2])}) inversion={r.worst_inversion}"
            )
        yield "PASS" if r.passed else "FAIL"

    _emit(ctx, resp, render)
    if not resp.passed:
        ctx.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
