"""Shared oracles and utilities for the test suite."""

import math

import numpy as np

from o3algebra import Irreps, irreps_matrix, rand_angles, wigner_d
from o3algebra.tensor_product import TensorProductSpec


def cg_rotation_residual(C: np.ndarray, l1: int, l2: int, l3: int, rng, rotations: int = 20) -> float:
    """Max deviation from C = C (D1 x D2 x D3) over random rotations."""
    worst = 0.0
    for _ in range(rotations):
        a = rand_angles(rng)
        D1, D2, D3 = wigner_d(l1, a), wigner_d(l2, a), wigner_d(l3, a)
        rotated = np.einsum("ijk,il,jm,kn->lmn", C, D1, D2, D3)
        worst = max(worst, float(np.abs(rotated - C).max()))
    return worst


def tp_path_bruteforce(spec: TensorProductSpec, weights: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Direct nested-loop summation of the per-path formula.

    Independent of the einsum evaluation path: explicit loops over
    multiplicities and components, weights segmented per instruction.
    """
    from o3algebra.cg import wigner_3j

    out = np.zeros(spec.irreps_out.dim)
    seg1 = spec.irreps_in1.slices()
    seg2 = spec.irreps_in2.slices()
    seg_out = spec.irreps_out.slices()
    w_offset = 0
    for ins in spec.instructions:
        m1, ir1 = spec.irreps_in1[ins.i_in1]
        m2, ir2 = spec.irreps_in2[ins.i_in2]
        mo, iro = spec.irreps_out[ins.i_out]
        b1 = x1[seg1[ins.i_in1]].reshape(m1, ir1.dim)
        b2 = x2[seg2[ins.i_in2]].reshape(m2, ir2.dim)
        C = math.sqrt(iro.dim) * wigner_3j(ir1.l, ir2.l, iro.l)
        shape = spec.weight_shape(ins)
        if ins.has_weight:
            n = int(np.prod(shape))
            w = weights[w_offset : w_offset + n].reshape(shape)
            w_offset += n
        else:
            w = np.ones(shape)
        block = np.zeros((mo, iro.dim))
        for k in range(iro.dim):
            for i in range(ir1.dim):
                for j in range(ir2.dim):
                    c = C[i, j, k]
                    if c == 0.0:
                        continue
                    for u in range(m1):
                        for v in range(m2):
                            if ins.mode == "uvw":
                                for ww in range(mo):
                                    block[ww, k] += w[u, v, ww] * c * b1[u, i] * b2[v, j]
                            elif ins.mode == "uvu":
                                block[u, k] += w[u, v] * c * b1[u, i] * b2[v, j]
                            elif ins.mode == "uuu":
                                if u == v:
                                    block[u, k] += w[u] * c * b1[u, i] * b2[u, j]
                            else:  # uvuv
                                block[u * m2 + v, k] += w[u, v] * c * b1[u, i] * b2[v, j]
        sl = seg_out[ins.i_out]
        out[sl] += ins.path_weight * block.reshape(-1)
    return out


def block_diag_rep(irreps, g) -> np.ndarray:
    return irreps_matrix(Irreps(irreps), g)
