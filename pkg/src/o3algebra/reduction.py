r"""Reduction of index-symmetrized tensor spaces onto direct sums of irreps.

An index formula such as ``"ijkl=jikl=ijlk=klij"`` (or with signs,
``"ij=-ji"``) declares symmetries of a tensor under permutations of its
indices.  The stated equalities generate a signed permutation group; the
tensor lives in the subspace stable under that group.  Given the irreps
carried by each index, `reduce_tensor` produces an orthonormal change of
basis ``Q`` from the flat tensor space onto a direct sum of irreps:

* rows of ``Q`` are orthonormal,
* ``Q D_X(g) = [⊕ D_i(g)] Q`` for every rotation ``g``,
* ``Q D_X(tau) = sign(tau) Q`` for every permutation ``tau`` of the group.

The rotation and permutation actions commute, so the two constraints are
solved separately and merged: a permutation-stable basis ``P`` from
group averaging, per-irrep rotation bases ``R_i`` from decomposing the
indices in chain, then for each irrep the multiplicity mixings ``W_i``
whose combinations land in ``span(P)``, found from the null space of a
block Gram matrix on a single irrep component.
"""

import dataclasses
import math
from typing import Dict, FrozenSet, List, Sequence, Tuple, Union

import numpy as np

from .cg import NULLSPACE_TOL, wigner_3j
from .irreps import Irrep, Irreps

__all__ = [
    "IndexFormula",
    "FormulaError",
    "ReducedBasis",
    "parse_formula",
    "permutation_matrix",
    "permutation_basis",
    "chained_decomposition",
    "reduce_tensor",
]

SignedPerm = Tuple[int, Tuple[int, ...]]


class FormulaError(ValueError):
    """Raised for malformed or inconsistent index formulas."""


@dataclasses.dataclass(frozen=True)
class IndexFormula:
    """Distinct index letters plus the signed permutation group they generate."""

    letters: str
    group: FrozenSet[SignedPerm]

    @property
    def order(self) -> int:
        return len(self.group)

    def sign(self, perm: Tuple[int, ...]) -> int:
        for s, p in self.group:
            if p == perm:
                return s
        raise KeyError(f"{perm} is not in the group")


def _compose(p1: Tuple[int, ...], p2: Tuple[int, ...]) -> Tuple[int, ...]:
    # matches the action on index tuples: idx -> tuple(idx[p[a]] for a)
    return tuple(p2[p1[a]] for a in range(len(p1)))


def parse_formula(text: str) -> IndexFormula:
    """Parse ``word ('=' ['-'] word)*`` and close it into a signed group.

    Raises `FormulaError` on malformed words, on words that are not
    permutations of the first, and on sign systems whose closure forces
    the tensor to vanish (e.g. ``"ij=-ij"``).
    """
    words: List[Tuple[int, str]] = []
    for part in text.split("="):
        part = part.strip()
        sign = 1
        if part.startswith("-"):
            sign = -1
            part = part[1:].strip()
        if not part.isalpha():
            raise FormulaError(f"malformed index word {part!r} in formula {text!r}")
        words.append((sign, part))
    s0, f0 = words[0]
    if s0 == -1:
        raise FormulaError(f"the leading word of {text!r} cannot carry a sign")
    n = len(f0)
    if not 2 <= n <= 6:
        raise FormulaError(f"formulas take 2 to 6 indices, got {n} in {text!r}")
    if len(set(f0)) != n:
        raise FormulaError(f"index letters must be distinct, got {f0!r}")
    for _, f in words:
        if sorted(f) != sorted(f0):
            raise FormulaError(f"{f!r} is not a permutation of {f0!r}")
    group = {(s, tuple(f.index(i) for i in f0)) for s, f in words}
    group.add((1, tuple(range(n))))
    while True:
        new = group | {
            (s1 * s2, _compose(p1, p2)) for s1, p1 in group for s2, p2 in group
        }
        if len(new) == len(group):
            break
        group = new
    signs: Dict[Tuple[int, ...], int] = {}
    for s, p in group:
        if signs.setdefault(p, s) != s:
            raise FormulaError("formula forces zero tensor")
    return IndexFormula(f0, frozenset(group))


def permutation_matrix(perm: Tuple[int, ...], dims: Sequence[int]) -> np.ndarray:
    """Matrix of the index-permutation action on the flattened tensor space.

    ``(M x)[i_0, ..., i_{n-1}] = x[i_{perm[0]}, ..., i_{perm[n-1]}]`` after
    reshaping, i.e. ``M`` realizes ``x -> transpose(x, perm)``.
    """
    D = math.prod(dims)
    dst = np.transpose(np.arange(D).reshape(tuple(dims)), axes=perm).reshape(-1)
    M = np.zeros((D, D))
    M[np.arange(D), dst] = 1.0
    return M


def permutation_basis(formula: IndexFormula, index_dims: Sequence[int]) -> np.ndarray:
    """Orthonormal row basis of the permutation-stable subspace.

    Group-averages the signed symmetrizer and extracts the range of the
    resulting orthogonal projector.
    """
    if len(index_dims) != len(formula.letters):
        raise FormulaError(
            f"formula {formula.letters!r} has {len(formula.letters)} indices, got {len(index_dims)} dims"
        )
    dims = tuple(int(d) for d in index_dims)
    D = math.prod(dims)
    flat = np.arange(D).reshape(dims)
    proj = np.zeros((D, D))
    for s, p in formula.group:
        dst = np.transpose(flat, axes=p).reshape(-1)
        proj[np.arange(D), dst] += s
    proj /= formula.order
    w, V = np.linalg.eigh(proj)
    return V[:, w > 0.5].T.copy()


def chained_decomposition(index_irreps: Sequence[Irreps]) -> Dict[Irrep, np.ndarray]:
    """Decompose a product of index spaces onto irreps, index by index.

    Returns one basis per occurring irrep ``i``: an array ``R_i`` of shape
    ``(mult_i, 2 l_i + 1, dim(X))`` with
    ``[1 (x) D_i(g)] R_i = R_i D_X(g)``.  Stacking all bases gives an
    orthogonal square matrix, so ``sum_i mult_i (2 l_i + 1) = dim(X)``.
    """
    irreps_list = [Irreps(irr) for irr in index_irreps]
    if not irreps_list:
        raise ValueError("at least one index is required")

    # identity layout for the first index
    blocks: List[Tuple[Irrep, np.ndarray]] = []
    d0 = irreps_list[0].dim
    offset = 0
    for mul, ir in irreps_list[0]:
        arr = np.zeros((mul, ir.dim, d0))
        for u in range(mul):
            for k in range(ir.dim):
                arr[u, k, offset + u * ir.dim + k] = 1.0
        blocks.append((ir, arr))
        offset += mul * ir.dim

    d_sofar = d0
    for irreps in irreps_list[1:]:
        d_next = irreps.dim
        new_blocks: List[Tuple[Irrep, np.ndarray]] = []
        for ir1, B in blocks:
            m1 = B.shape[0]
            offset = 0
            for m2, ir2 in irreps:
                for ir3 in ir1 * ir2:
                    C = math.sqrt(ir3.dim) * wigner_3j(ir1.l, ir2.l, ir3.l)
                    T = np.einsum("ijk,uix->ukxj", C, B)
                    arr = np.zeros((m1, m2, ir3.dim, d_sofar, d_next))
                    for v in range(m2):
                        col = offset + v * ir2.dim
                        arr[:, v, :, :, col : col + ir2.dim] = T
                    new_blocks.append((ir3, arr.reshape(m1 * m2, ir3.dim, d_sofar * d_next)))
                offset += m2 * ir2.dim
        blocks = new_blocks
        d_sofar *= d_next

    merged: Dict[Irrep, List[np.ndarray]] = {}
    for ir, arr in blocks:
        merged.setdefault(ir, []).append(arr)
    return {ir: np.concatenate(arrs, axis=0) for ir, arrs in merged.items()}


def _orthonormal_rows(rows: np.ndarray, tol: float = NULLSPACE_TOL) -> np.ndarray:
    """Gram-Schmidt with a re-orthogonalization pass and pivot tolerance."""
    out: List[np.ndarray] = []
    for v in rows:
        v = v.astype(float, copy=True)
        for _ in range(2):
            for u in out:
                v -= (u @ v) * u
        n = np.linalg.norm(v)
        if n > tol:
            out.append(v / n)
    if not out:
        return np.zeros((0, rows.shape[1]))
    return np.array(out)


@dataclasses.dataclass(frozen=True)
class ReducedBasis:
    """Output irreps and the orthonormal change of basis realizing them.

    ``Q`` has one row per output component, grouped by irrep block in the
    order of ``irreps_out``, and ``dim(X)`` columns.
    """

    irreps_out: Irreps
    Q: np.ndarray

    @property
    def dim(self) -> int:
        return self.irreps_out.dim


def _resolve_irreps(formula: IndexFormula, assignments: Dict[str, Union[str, Irreps]]) -> List[Irreps]:
    irreps_by_letter: Dict[str, Irreps] = {}
    for letter, irr in assignments.items():
        if len(letter) != 1 or letter not in formula.letters:
            raise FormulaError(f"index {letter!r} does not appear in formula {formula.letters!r}")
        irreps_by_letter[letter] = Irreps(irr)
    # indices related by a permutation must carry identical irreps
    changed = True
    while changed:
        changed = False
        for _, p in formula.group:
            for a, b in enumerate(p):
                la, lb = formula.letters[a], formula.letters[b]
                ia, ib = irreps_by_letter.get(la), irreps_by_letter.get(lb)
                if ia is not None and ib is not None:
                    if ia != ib:
                        raise FormulaError(
                            f"indices {la!r} and {lb!r} are related by a permutation "
                            f"but carry different irreps ({ia} vs {ib})"
                        )
                elif ia is not None:
                    irreps_by_letter[lb] = ia
                    changed = True
                elif ib is not None:
                    irreps_by_letter[la] = ib
                    changed = True
    missing = [letter for letter in formula.letters if letter not in irreps_by_letter]
    if missing:
        raise FormulaError(f"no irreps assigned to index {missing[0]!r}")
    return [irreps_by_letter[letter] for letter in formula.letters]


def reduce_tensor(
    formula: Union[str, IndexFormula],
    component: int = 0,
    **index_irreps: Union[str, Irreps],
) -> ReducedBasis:
    """Reduce an index-symmetrized tensor space onto irreps.

    Args:
        formula: index formula, e.g. ``"ijkl=jikl=ijlk=klij"``.
        component: which irrep component the mixing system is solved on,
            clamped per irrep (any component gives the same basis;
            exposed for testing).
        **index_irreps: irreps carried by each index letter, e.g.
            ``i="1o"``.  Letters related by a permutation inherit the
            assignment and must not conflict.

    Examples:
        >>> reduce_tensor("ij=ji", i="1o").irreps_out
        1x0e+1x2e
        >>> reduce_tensor("ijkl=jikl=ijlk=klij", i="1o").irreps_out
        2x0e+2x2e+1x4e
    """
    if isinstance(formula, str):
        formula = parse_formula(formula)
    irreps_list = _resolve_irreps(formula, index_irreps)
    dims = tuple(irr.dim for irr in irreps_list)
    D = math.prod(dims)

    P = permutation_basis(formula, dims)
    R = chained_decomposition(irreps_list)

    q_blocks: List[np.ndarray] = []
    out_entries: List[Tuple[int, Irrep]] = []
    for ir in sorted(R.keys(), key=lambda ir: ir._key()):
        arr = R[ir]  # (mult, 2l+1, D)
        mult = arr.shape[0]
        if mult == 0:
            continue
        r = arr[:, min(component, ir.dim - 1), :]
        # null vectors (w, wt) of [r; -P][r; -P]^T satisfy w^T r = wt^T P,
        # i.e. w mixes multiplicities into span(P)
        U = np.block([[r @ r.T, -r @ P.T], [-P @ r.T, P @ P.T]])
        E, V = np.linalg.eigh(U)
        W = V[:, E < NULLSPACE_TOL][:mult].T  # candidate mixings, one row each
        W = _orthonormal_rows(W)
        if W.shape[0] == 0:
            continue
        Q_i = np.einsum("su,ukx->skx", W, arr)
        q_blocks.append(Q_i.reshape(W.shape[0] * ir.dim, D))
        out_entries.append((W.shape[0], ir))

    if not q_blocks:
        return ReducedBasis(Irreps([]), np.zeros((0, D)))
    return ReducedBasis(Irreps(out_entries), np.concatenate(q_blocks, axis=0))
