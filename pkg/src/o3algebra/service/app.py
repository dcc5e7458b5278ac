"""HTTP service exposing the library's verification operations.

All computation endpoints are POST with JSON bodies; domain errors
(triangle-rule violations, malformed formulas, resolution below Nyquist)
come back as 400 with a detail message, schema violations as the usual
422.  Run with ``o3a serve`` or ``uvicorn o3algebra.service:app``.
"""

from fastapi import FastAPI, HTTPException

from .. import __version__
from . import handlers, models

app = FastAPI(
    title="o3algebra",
    description="O(3)-equivariant tensor algebra as a service",
    version=__version__,
)


def _run(handler, request):
    try:
        return handler(request)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health", response_model=models.HealthResponse)
def health() -> models.HealthResponse:
    return handlers.health()


@app.post("/wigner", response_model=models.WignerResponse)
def wigner(req: models.WignerRequest) -> models.WignerResponse:
    return _run(handlers.wigner, req)


@app.post("/cg", response_model=models.CGResponse)
def cg(req: models.CGRequest) -> models.CGResponse:
    return _run(handlers.cg, req)


@app.post("/sh", response_model=models.SHResponse)
def sh(req: models.SHRequest) -> models.SHResponse:
    return _run(handlers.sh, req)


@app.post("/reduce", response_model=models.ReduceResponse)
def reduce(req: models.ReduceRequest) -> models.ReduceResponse:
    return _run(handlers.reduce, req)


@app.post("/tp/info", response_model=models.TPInfoResponse)
def tp_info(req: models.TPInfoRequest) -> models.TPInfoResponse:
    return _run(handlers.tp_info, req)


@app.post("/tp/check", response_model=models.TPCheckResponse)
def tp_check(req: models.TPCheckRequest) -> models.TPCheckResponse:
    return _run(handlers.tp_check, req)


@app.post("/s2/roundtrip", response_model=models.S2RoundtripResponse)
def s2_roundtrip(req: models.S2RoundtripRequest) -> models.S2RoundtripResponse:
    return _run(handlers.s2_roundtrip, req)


@app.post("/equivariance/check", response_model=models.EquivarianceCheckResponse)
def equivariance_check(req: models.EquivarianceCheckRequest) -> models.EquivarianceCheckResponse:
    return _run(handlers.equivariance_check, req)
