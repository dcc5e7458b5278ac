"""Request and response models of the verification service.

`TensorProductSpecModel` doubles as the on-disk JSON format for tensor
product specs: the files consumed by the CLI are exactly this model.
``path_weight`` may be omitted, in which case the standard normalization
constants are filled in.
"""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

Angles = Tuple[float, float, float]
Vec3 = Tuple[float, float, float]


class HealthResponse(BaseModel):
    status: str
    version: str


class WignerRequest(BaseModel):
    l: int = Field(ge=0, description="rotation order")
    angles: Angles = Field(description="Y-X-Y Euler angles in radians")


class WignerResponse(BaseModel):
    l: int
    angles: Angles
    matrix: List[List[float]]


class CGRequest(BaseModel):
    l1: int = Field(ge=0)
    l2: int = Field(ge=0)
    l3: int = Field(ge=0)


class CGResponse(BaseModel):
    l1: int
    l2: int
    l3: int
    shape: Tuple[int, int, int]
    values: List[List[List[float]]]


class SHRequest(BaseModel):
    lmax: int = Field(ge=0)
    point: Vec3
    normalize: bool = True
    normalization: Literal["norm", "component", "integral"] = "integral"


class SHResponse(BaseModel):
    lmax: int
    normalize: bool
    normalization: str
    values: List[float]
    blocks: List[List[float]]


class ReduceRequest(BaseModel):
    formula: str
    irreps: Dict[str, str] = Field(description="irreps per index letter, e.g. {'i': '1o'}")
    include_basis: bool = False


class ReduceResponse(BaseModel):
    formula: str
    irreps_out: str
    dim: int
    space_dim: int
    group_order: int
    basis: Optional[List[List[float]]] = None


class InstructionModel(BaseModel):
    i_in1: int = Field(ge=0)
    i_in2: int = Field(ge=0)
    i_out: int = Field(ge=0)
    mode: Literal["uvw", "uvu", "uuu", "uvuv"]
    has_weight: bool
    path_weight: Optional[float] = None


class TensorProductSpecModel(BaseModel):
    irreps_in1: str
    irreps_in2: str
    irreps_out: str
    instructions: List[InstructionModel]


class TPInfoRequest(BaseModel):
    spec: TensorProductSpecModel


class PathRow(BaseModel):
    i_in1: int
    i_in2: int
    i_out: int
    ir_in1: str
    ir_in2: str
    ir_out: str
    mode: str
    has_weight: bool
    num_weights: int
    path_weight: float


class TPInfoResponse(BaseModel):
    irreps_in1: str
    irreps_in2: str
    irreps_out: str
    paths: int
    weight_numel: int
    table: List[PathRow]


class TPCheckRequest(BaseModel):
    spec: TensorProductSpecModel
    trials: int = Field(default=20, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    seed: int = 0


class TPCheckResponse(BaseModel):
    passed: bool
    trials: int
    tol: float
    equivariance_residual: float
    bilinearity_residual: float


class S2RoundtripRequest(BaseModel):
    lmax: int = Field(ge=0)
    res_beta: int = Field(ge=1)
    res_alpha: int = Field(ge=1)
    trials: int = Field(default=5, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    seed: int = 0


class S2RoundtripResponse(BaseModel):
    passed: bool
    lmax: int
    res_beta: int
    res_alpha: int
    tol: float
    max_roundtrip_error: float
    parseval_error: float


class EquivarianceCheckRequest(BaseModel):
    spec: TensorProductSpecModel
    trials: int = Field(default=20, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    seed: int = 0


class EquivarianceCheckResponse(BaseModel):
    passed: bool
    trials: int
    tol: float
    max_residual: float
    worst_angles: Angles
    worst_inversion: bool
