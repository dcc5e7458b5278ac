r"""Parameterized bilinear equivariant operations between irrep vectors.

A tensor-product spec is a validated set of **paths**: each path couples
one entry of the first input irreps with one entry of the second into
one entry of the output, through the Clebsch-Gordan tensor of the three
orders.  A path is admissible when ``|l1 - l2| <= l3 <= l1 + l2`` and
``p1 p2 = p3``.

Connection modes decide how multiplicity indices are wired and how many
weights a path carries:

======  =========================  ==============  ==================
mode    constraint                 weights          normalization
======  =========================  ==============  ==================
uvw     none                       ``m1 m2 mout``  ``1/sqrt(m1 m2)``
uvu     ``mout = m1``              ``m1 m2``       ``1/sqrt(m2)``
uuu     ``m1 = m2 = mout``         ``m1``          ``1``
uvuv    ``mout = m1 m2``           ``m1 m2``       ``1``
======  =========================  ==============  ==================

Each output entry additionally carries a factor
``sqrt(1 / number of paths into it)`` so that with component-normalized
standard-normal inputs and standard-normal weights every output
component has second moment close to 1.  Inside a path the CG tensor is
used in its orthogonal-change-of-basis scaling ``sqrt(2 l3 + 1) * C``
(rows of the stacked change of basis orthonormal), which is what makes
the variance bookkeeping above come out right.

Weight layout: one contiguous segment per weighted instruction, in
instruction order, each segment row-major over its index tuple
(``(u, v, w)`` for uvw).  This layout is part of the serialization
format.
"""

import dataclasses
import json
import math
import warnings
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cg import wigner_3j
from .irreps import Irreps

__all__ = [
    "MODES",
    "Instruction",
    "TensorProductSpec",
    "TensorProductError",
    "ZeroPathWarning",
    "build_spec",
    "validate",
    "evaluate",
    "fully_connected",
    "full_tensor_product",
    "tensor_square",
    "LinearSpec",
    "linear",
]

MODES = ("uvw", "uvu", "uuu", "uvuv")


class TensorProductError(ValueError):
    """Raised when a spec fails validation or an evaluation input mismatches."""


class ZeroPathWarning(UserWarning):
    """Emitted when an output entry has no admissible incoming path."""


@dataclasses.dataclass(frozen=True)
class Instruction:
    """One path: entry indices into the three irreps lists plus wiring.

    ``path_weight`` is the fixed normalization constant multiplying the
    path (mode factor times the per-output ``sqrt(1/num_paths)``).
    """

    i_in1: int
    i_in2: int
    i_out: int
    mode: str
    has_weight: bool
    path_weight: float = 1.0


@dataclasses.dataclass(frozen=True)
class TensorProductSpec:
    """A validated set of weighted bilinear paths between irreps."""

    irreps_in1: Irreps
    irreps_in2: Irreps
    irreps_out: Irreps
    instructions: Tuple[Instruction, ...]

    def problems(self) -> List[str]:
        """Diagnostics for every invalid instruction; empty when valid."""
        out = []
        for n, ins in enumerate(self.instructions):
            where = f"instruction {n} ({ins.i_in1}, {ins.i_in2}) -> {ins.i_out}"
            try:
                if min(ins.i_in1, ins.i_in2, ins.i_out) < 0:
                    raise IndexError
                m1, ir1 = self.irreps_in1[ins.i_in1]
                m2, ir2 = self.irreps_in2[ins.i_in2]
                mo, iro = self.irreps_out[ins.i_out]
            except IndexError:
                out.append(f"{where}: entry index out of range")
                continue
            if ins.mode not in MODES:
                out.append(f"{where}: unknown mode {ins.mode!r}")
                continue
            if iro not in ir1 * ir2:
                out.append(
                    f"{where}: {iro} is not in the product of {ir1} and {ir2} "
                    f"(selection rule |l1-l2| <= l3 <= l1+l2, p3 = p1*p2)"
                )
            if ins.mode == "uvu" and mo != m1:
                out.append(f"{where}: mode uvu requires mul_out == mul_in1 ({mo} != {m1})")
            if ins.mode == "uuu" and not (m1 == m2 == mo):
                out.append(f"{where}: mode uuu requires equal multiplicities ({m1}, {m2}, {mo})")
            if ins.mode == "uvuv" and mo != m1 * m2:
                out.append(f"{where}: mode uvuv requires mul_out == mul_in1 * mul_in2 ({mo} != {m1 * m2})")
        return out

    def validate(self) -> "TensorProductSpec":
        problems = self.problems()
        if problems:
            raise TensorProductError("; ".join(problems))
        return self

    def weight_shape(self, ins: Instruction) -> Tuple[int, ...]:
        m1 = self.irreps_in1[ins.i_in1].mul
        m2 = self.irreps_in2[ins.i_in2].mul
        mo = self.irreps_out[ins.i_out].mul
        return {
            "uvw": (m1, m2, mo),
            "uvu": (m1, m2),
            "uuu": (m1,),
            "uvuv": (m1, m2),
        }[ins.mode]

    @property
    def weight_numel(self) -> int:
        """Total number of scalar weights, over weighted instructions."""
        return sum(math.prod(self.weight_shape(ins)) for ins in self.instructions if ins.has_weight)

    @property
    def num_paths(self) -> int:
        return len(self.instructions)

    def paths_into(self, i_out: int) -> int:
        return sum(1 for ins in self.instructions if ins.i_out == i_out)

    def evaluate(self, weights: Optional[np.ndarray], x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        return evaluate(self, weights, x1, x2)

    def to_dict(self) -> dict:
        return {
            "irreps_in1": repr(self.irreps_in1),
            "irreps_in2": repr(self.irreps_in2),
            "irreps_out": repr(self.irreps_out),
            "instructions": [dataclasses.asdict(ins) for ins in self.instructions],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @staticmethod
    def from_dict(data: dict) -> "TensorProductSpec":
        raw = []
        explicit = []
        for entry in data["instructions"]:
            raw.append(
                (
                    int(entry["i_in1"]),
                    int(entry["i_in2"]),
                    int(entry["i_out"]),
                    str(entry["mode"]),
                    bool(entry["has_weight"]),
                )
            )
            explicit.append(entry.get("path_weight"))
        spec = build_spec(
            data["irreps_in1"], data["irreps_in2"], data["irreps_out"], raw, warn=False
        )
        if any(pw is not None for pw in explicit):
            instructions = tuple(
                dataclasses.replace(ins, path_weight=float(pw)) if pw is not None else ins
                for ins, pw in zip(spec.instructions, explicit)
            )
            spec = dataclasses.replace(spec, instructions=instructions)
        return spec

    @staticmethod
    def from_json(text: str) -> "TensorProductSpec":
        return TensorProductSpec.from_dict(json.loads(text))


def validate(spec: TensorProductSpec) -> List[str]:
    """Diagnostics for an existing spec (empty list means valid)."""
    return spec.problems()


def _mode_norm(mode: str, m1: int, m2: int) -> float:
    if mode == "uvw":
        return 1.0 / math.sqrt(m1 * m2) if m1 * m2 > 0 else 0.0
    if mode == "uvu":
        return 1.0 / math.sqrt(m2) if m2 > 0 else 0.0
    return 1.0


def build_spec(
    irreps_in1,
    irreps_in2,
    irreps_out,
    instructions: Sequence[Tuple[int, int, int, str, bool]],
    warn: bool = True,
) -> TensorProductSpec:
    """Assemble and validate a spec, filling in normalization constants."""
    irreps_in1, irreps_in2, irreps_out = Irreps(irreps_in1), Irreps(irreps_in2), Irreps(irreps_out)
    counts = [0] * len(irreps_out)
    for _, _, i_out, _, _ in instructions:
        if 0 <= i_out < len(irreps_out):
            counts[i_out] += 1
    built = []
    for i1, i2, io, mode, has_weight in instructions:
        m1 = irreps_in1[i1].mul if 0 <= i1 < len(irreps_in1) else 0
        m2 = irreps_in2[i2].mul if 0 <= i2 < len(irreps_in2) else 0
        n_paths = counts[io] if 0 <= io < len(irreps_out) else 1
        pw = math.sqrt(1.0 / n_paths) * _mode_norm(mode, m1, m2) if n_paths else 1.0
        built.append(Instruction(i1, i2, io, mode, has_weight, pw))
    spec = TensorProductSpec(irreps_in1, irreps_in2, irreps_out, tuple(built)).validate()
    if warn:
        for io, n in enumerate(counts):
            if n == 0:
                warnings.warn(
                    f"output entry {io} ({irreps_out[io]}) has no incoming path and will be zero",
                    ZeroPathWarning,
                    stacklevel=3,
                )
    return spec


def fully_connected(irreps_in1, irreps_in2, irreps_out) -> TensorProductSpec:
    """One weighted uvw path for every selection-rule-allowed triple.

    Outputs with no allowed path are permitted but produce zeros (a
    `ZeroPathWarning` is emitted).
    """
    irreps_in1, irreps_in2, irreps_out = Irreps(irreps_in1), Irreps(irreps_in2), Irreps(irreps_out)
    instructions = [
        (i1, i2, io, "uvw", True)
        for i1, (_, ir1) in enumerate(irreps_in1)
        for i2, (_, ir2) in enumerate(irreps_in2)
        for io, (_, iro) in enumerate(irreps_out)
        if iro in ir1 * ir2
    ]
    return build_spec(irreps_in1, irreps_in2, irreps_out, instructions)


def full_tensor_product(irreps_in1, irreps_in2) -> TensorProductSpec:
    """The complete bilinear operation ``x (x) y`` decomposed onto irreps.

    Unweighted; the output lists every allowed irrep of every input pair
    with multiplicity ``m1 * m2`` (mode uvuv), so the output dimension is
    ``dim(x) * dim(y)`` and the map is an isometry.
    """
    irreps_in1, irreps_in2 = Irreps(irreps_in1), Irreps(irreps_in2)
    out_entries = []
    instructions = []
    for i1, (m1, ir1) in enumerate(irreps_in1):
        for i2, (m2, ir2) in enumerate(irreps_in2):
            for ir3 in ir1 * ir2:
                instructions.append((i1, i2, len(out_entries), "uvuv", False))
                out_entries.append((m1 * m2, ir3))
    return build_spec(irreps_in1, irreps_in2, Irreps(out_entries), instructions)


def tensor_square(irreps_in) -> TensorProductSpec:
    """``full_tensor_product(irreps, irreps)``, to be evaluated on ``(x, x)``.

    The antisymmetric part is redundant for equal inputs but is kept
    numerically; callers may drop it by slicing.
    """
    irreps_in = Irreps(irreps_in)
    return full_tensor_product(irreps_in, irreps_in)


def _segments(irreps: Irreps) -> List[Tuple[int, int, int]]:
    """(offset, mul, dim) for each entry."""
    out, offset = [], 0
    for mul, ir in irreps:
        out.append((offset, mul, ir.dim))
        offset += mul * ir.dim
    return out


def evaluate(
    spec: TensorProductSpec,
    weights: Optional[np.ndarray],
    x1: np.ndarray,
    x2: np.ndarray,
) -> np.ndarray:
    """Apply the tensor product: bilinear in ``(x1, x2)``, linear in weights.

    ``x1``/``x2`` have shape ``(..., dim_in1)`` / ``(..., dim_in2)`` with
    broadcastable batch dimensions; ``weights`` is a flat vector of length
    ``spec.weight_numel`` (``None`` allowed when that is zero).
    """
    spec.validate()
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape[-1] != spec.irreps_in1.dim:
        raise TensorProductError(f"x1 has dimension {x1.shape[-1]}, spec expects {spec.irreps_in1.dim}")
    if x2.shape[-1] != spec.irreps_in2.dim:
        raise TensorProductError(f"x2 has dimension {x2.shape[-1]}, spec expects {spec.irreps_in2.dim}")
    numel = spec.weight_numel
    if weights is None:
        if numel:
            raise TensorProductError(f"spec has {numel} weights but none were given")
        weights = np.zeros(0)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (numel,):
        raise TensorProductError(f"weights must have shape ({numel},), got {weights.shape}")

    batch = np.broadcast_shapes(x1.shape[:-1], x2.shape[:-1])
    out = np.zeros(batch + (spec.irreps_out.dim,))
    seg1, seg2, seg_out = _segments(spec.irreps_in1), _segments(spec.irreps_in2), _segments(spec.irreps_out)

    w_offset = 0
    for ins in spec.instructions:
        o1, m1, d1 = seg1[ins.i_in1]
        o2, m2, d2 = seg2[ins.i_in2]
        oo, mo, do = seg_out[ins.i_out]
        if ins.has_weight:
            shape = spec.weight_shape(ins)
            w = weights[w_offset : w_offset + math.prod(shape)].reshape(shape)
            w_offset += math.prod(shape)
        else:
            w = np.ones(spec.weight_shape(ins))
        if 0 in (m1, m2, mo):
            continue
        ir1 = spec.irreps_in1[ins.i_in1].ir
        ir2 = spec.irreps_in2[ins.i_in2].ir
        iro = spec.irreps_out[ins.i_out].ir
        # orthogonal-change-of-basis scaling of the CG block
        C = math.sqrt(iro.dim) * wigner_3j(ir1.l, ir2.l, iro.l)
        b1 = x1[..., o1 : o1 + m1 * d1].reshape(x1.shape[:-1] + (m1, d1))
        b2 = x2[..., o2 : o2 + m2 * d2].reshape(x2.shape[:-1] + (m2, d2))
        if ins.mode == "uvw":
            block = np.einsum("uvw,ijk,...ui,...vj->...wk", w, C, b1, b2, optimize=True)
        elif ins.mode == "uvu":
            block = np.einsum("uv,ijk,...ui,...vj->...uk", w, C, b1, b2, optimize=True)
        elif ins.mode == "uuu":
            block = np.einsum("u,ijk,...ui,...uj->...uk", w, C, b1, b2, optimize=True)
        else:  # uvuv
            block = np.einsum("uv,ijk,...ui,...vj->...uvk", w, C, b1, b2, optimize=True)
            block = block.reshape(block.shape[:-3] + (m1 * m2, do))
        out[..., oo : oo + mo * do] += ins.path_weight * block.reshape(batch + (mo * do,))
    return out


@dataclasses.dataclass(frozen=True)
class LinearSpec:
    """Weighted mixing between equal ``(l, p)`` blocks, equivariant for any
    weights.

    Realized as a tensor product against a constant scalar: the CG block
    of ``l x 0 -> l`` is the identity, so each path reduces to
    ``out_wk = 1/sqrt(m_in) sum_u w_uw in_uk``.
    """

    irreps_in: Irreps
    irreps_out: Irreps
    tp: TensorProductSpec

    @property
    def weight_numel(self) -> int:
        return self.tp.weight_numel

    def evaluate(self, weights: Optional[np.ndarray], x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        ones = np.ones(x.shape[:-1] + (1,))
        return evaluate(self.tp, weights, x, ones)


def linear(irreps_in, irreps_out) -> LinearSpec:
    """Equivariant linear map; blocks with no matching input are zero."""
    irreps_in, irreps_out = Irreps(irreps_in), Irreps(irreps_out)
    return LinearSpec(irreps_in, irreps_out, fully_connected(irreps_in, "0e", irreps_out))
