r"""Real-basis Clebsch-Gordan (Wigner 3j) coefficient tensors.

A CG tensor for a triple ``(l1, l2, l3)`` is the unique (up to sign)
rank-3 tensor left invariant by simultaneous rotation of its three
indices.  It is computed here from the infinitesimal form of that
invariance: the tensor must be annihilated by
``J_a x 1 x 1 + 1 x J_a x 1 + 1 x 1 x J_a`` for each axis ``a``.  The
null space of that linear system is found by symmetric
eigendecomposition and must be exactly one-dimensional.

Normalization: Frobenius norm 1.  Sign: the first entry larger than a
relative tolerance in lexicographic ``(i, j, k)`` order is positive.
Signs therefore need not match external tables entry by entry.
"""

from functools import lru_cache

import numpy as np
import scipy.linalg

from .rotations import generators

__all__ = ["wigner_3j", "invariant_subspace_dim", "NULLSPACE_TOL"]

# mirrors the eigenvalue threshold used by the reduction solver
NULLSPACE_TOL = 1e-9

_SIGN_REL_TOL = 1e-6


def _triangle_ok(l1: int, l2: int, l3: int) -> bool:
    return abs(l1 - l2) <= l3 <= l1 + l2


def _invariance_gram(l1: int, l2: int, l3: int) -> np.ndarray:
    """Gram matrix ``M^T M`` of the stacked invariance system.

    With ``X_a = J_a (+) J_a (+) J_a`` antisymmetric, ``sum_a X_a^T X_a``
    expands to ``[l1(l1+1) + l2(l2+1) + l3(l3+1)] I`` minus twice the
    pairwise cross terms (the squared single-factor terms are the
    per-factor Casimirs).  Assembling the cross terms directly avoids
    any full-size matrix product.
    """
    n1, n2, n3 = 2 * l1 + 1, 2 * l2 + 1, 2 * l3 + 1
    g1, g2, g3 = generators(l1), generators(l2), generators(l3)
    i1, i2, i3 = np.eye(n1), np.eye(n2), np.eye(n3)
    N = n1 * n2 * n3
    G = float(l1 * (l1 + 1) + l2 * (l2 + 1) + l3 * (l3 + 1)) * np.eye(N)
    for J1, J2, J3 in zip(g1, g2, g3):
        G -= 2.0 * np.kron(np.kron(J1, J2), i3)
        G -= 2.0 * np.kron(np.kron(J1, i2), J3)
        G -= 2.0 * np.kron(np.kron(i1, J2), J3)
    return G


def _smallest_eigs(G: np.ndarray, k: int, vectors: bool):
    n = G.shape[0]
    k = min(k, n)
    if vectors:
        return scipy.linalg.eigh(G, subset_by_index=(0, k - 1))
    return scipy.linalg.eigh(G, subset_by_index=(0, k - 1), eigvals_only=True), None


def invariant_subspace_dim(l1: int, l2: int, l3: int) -> int:
    """Dimension of the rotation-invariant subspace of ``l1 x l2 x l3``.

    1 when the triangle rule admits the triple, 0 otherwise; computed
    numerically from the invariance system, not from the triangle rule.
    """
    G = _invariance_gram(l1, l2, l3)
    vals, _ = _smallest_eigs(G, 3, vectors=False)
    count = int(np.sum(vals < NULLSPACE_TOL))
    if count == len(vals) and len(vals) < G.shape[0]:
        # all probed eigenvalues were tiny: fall back to the full spectrum
        count = int(np.sum(scipy.linalg.eigvalsh(G) < NULLSPACE_TOL))
    return count


@lru_cache(maxsize=None)
def wigner_3j(l1: int, l2: int, l3: int) -> np.ndarray:
    """Real CG tensor of shape ``(2l1+1, 2l2+1, 2l3+1)``, Frobenius norm 1.

    Raises ``ValueError`` if the triple violates the triangle rule.
    The returned array is cached and read-only.
    """
    if min(l1, l2, l3) < 0:
        raise ValueError(f"orders must be >= 0, got ({l1}, {l2}, {l3})")
    if not _triangle_ok(l1, l2, l3):
        raise ValueError(
            f"({l1}, {l2}, {l3}) violates the triangle rule |l1 - l2| <= l3 <= l1 + l2"
        )
    G = _invariance_gram(l1, l2, l3)
    vals, vecs = _smallest_eigs(G, 2, vectors=True)
    if not vals[0] < NULLSPACE_TOL:
        raise RuntimeError(f"no invariant tensor found for ({l1}, {l2}, {l3})")
    if len(vals) > 1 and vals[1] < NULLSPACE_TOL:
        raise RuntimeError(f"invariant subspace of ({l1}, {l2}, {l3}) is degenerate")
    c = vecs[:, 0]
    c = c / np.linalg.norm(c)
    nonzero = np.flatnonzero(np.abs(c) > _SIGN_REL_TOL * np.abs(c).max())
    if c[nonzero[0]] < 0:
        c = -c
    C = c.reshape(2 * l1 + 1, 2 * l2 + 1, 2 * l3 + 1)
    C.setflags(write=False)
    return C
