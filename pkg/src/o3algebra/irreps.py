r"""Irreducible representation labels of :math:`O(3)` and ordered direct sums.

An `Irrep` is a pair ``(l, p)``: the rotation order ``l`` (dimension
``2l + 1``) and the parity ``p`` (``+1`` printed ``e``, ``-1`` printed
``o``).  An `Irreps` is an ordered list of multiplicities of irreps; the
order is significant because it defines the data layout of feature
vectors.  Both types are immutable and hashable.

The string grammar, used everywhere (CLI, JSON specs), is::

    irreps := term ('+' term)*
    term   := [uint 'x'] uint ('e'|'o')

with arbitrary whitespace around tokens and an omitted multiplicity
meaning 1.
"""

import dataclasses
import re
from typing import Iterator, List, NamedTuple, Sequence, Tuple, Union

__all__ = [
    "Irrep",
    "MulIrrep",
    "Irreps",
    "IrrepsParseError",
    "parse_irreps",
    "selection_rule",
    "sh_irreps",
]


class IrrepsParseError(ValueError):
    """Raised when an irrep or irreps string does not match the grammar."""


_IRREP_RE = re.compile(r"(\d+)\s*([a-zA-Z])")
_TERM_RE = re.compile(r"(?:(\d+)\s*x\s*)?(\d+)\s*([a-zA-Z])")

IntoIrrep = Union["Irrep", str, Tuple[int, int]]
IntoIrreps = Union["Irreps", "Irrep", "MulIrrep", str, Sequence, None]


@dataclasses.dataclass(frozen=True, init=False)
class Irrep:
    """Irreducible representation of :math:`O(3)`.

    Examples:
        >>> Irrep(2, 1)
        2e
        >>> Irrep("1o").dim
        3
        >>> Irrep("1o") * Irrep("1o")
        [0e, 1e, 2e]
    """

    l: int
    p: int

    def __init__(self, l: IntoIrrep, p: int = None):
        if p is None:
            if isinstance(l, Irrep):
                l, p = l.l, l.p
            elif isinstance(l, str):
                l, p = _parse_irrep(l)
            elif isinstance(l, tuple) and len(l) == 2:
                l, p = l
            else:
                raise IrrepsParseError(f"cannot interpret {l!r} as an irrep")
        if not (isinstance(l, int) and l >= 0):
            raise IrrepsParseError(f"rotation order must be a non-negative integer, got {l!r}")
        if p not in (1, -1):
            raise IrrepsParseError(f"parity must be +1 or -1, got {p!r}")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        """Dimension of the representation, ``2l + 1``."""
        return 2 * self.l + 1

    def __repr__(self) -> str:
        return f"{self.l}{'e' if self.p == 1 else 'o'}"

    def __mul__(self, other: IntoIrrep) -> List["Irrep"]:
        """Selection rule: all irreps in the product of two irreps.

        Returns every ``(l3, p3)`` with ``|l1 - l2| <= l3 <= l1 + l2`` and
        ``p3 = p1 * p2``, ascending in ``l3``.
        """
        other = Irrep(other)
        p = self.p * other.p
        return [Irrep(l, p) for l in range(abs(self.l - other.l), self.l + other.l + 1)]

    def __iter__(self) -> Iterator[int]:
        yield self.l
        yield self.p

    def _key(self) -> Tuple[int, int]:
        # ascending l, even before odd
        return (self.l, 0 if self.p == 1 else 1)

    def __lt__(self, other: "Irrep") -> bool:
        return self._key() < other._key()


def _parse_irrep(text: str) -> Tuple[int, int]:
    m = _IRREP_RE.fullmatch(text.strip())
    if m is None:
        raise IrrepsParseError(f"malformed irrep {text!r}")
    l_s, p_s = m.groups()
    if p_s not in ("e", "o"):
        raise IrrepsParseError(f"unknown parity letter {p_s!r} in {text!r}")
    return int(l_s), 1 if p_s == "e" else -1


class MulIrrep(NamedTuple):
    """An irrep with a multiplicity; occupies ``mul * (2l + 1)`` slots."""

    mul: int
    ir: Irrep

    @property
    def dim(self) -> int:
        return self.mul * self.ir.dim

    def __repr__(self) -> str:
        return f"{self.mul}x{self.ir}"


class Irreps(tuple):
    """Ordered direct sum of irreps of :math:`O(3)`.

    The user-given order and duplicates are preserved: no merging and no
    sorting happen on construction, because the order defines the layout
    of data vectors.

    Examples:
        >>> Irreps("1x0e + 1x2e")
        1x0e+1x2e
        >>> Irreps("1x0e + 1x2e").dim
        6
        >>> Irreps("64x0e + 24x1e").dim
        136
        >>> Irreps([(2, Irrep("0e")), (1, "1o")])
        2x0e+1x1o
    """

    def __new__(cls, irreps: IntoIrreps = None):
        if isinstance(irreps, Irreps):
            return super().__new__(cls, irreps)
        out: List[MulIrrep] = []
        if irreps is None:
            pass
        elif isinstance(irreps, Irrep):
            out.append(MulIrrep(1, irreps))
        elif isinstance(irreps, MulIrrep):
            out.append(irreps)
        elif isinstance(irreps, str):
            out = _parse_irreps_str(irreps)
        else:
            for entry in irreps:
                if isinstance(entry, (Irrep, str)):
                    out.append(MulIrrep(1, Irrep(entry)))
                elif isinstance(entry, MulIrrep):
                    out.append(entry)
                elif len(entry) == 2:
                    mul, ir = entry
                    if not (isinstance(mul, int) and mul >= 0):
                        raise IrrepsParseError(f"multiplicity must be a non-negative integer, got {mul!r}")
                    out.append(MulIrrep(mul, Irrep(ir)))
                else:
                    raise IrrepsParseError(f"cannot interpret {entry!r} as a multiplicity and an irrep")
        return super().__new__(cls, out)

    @staticmethod
    def spherical_harmonics(lmax: int) -> "Irreps":
        """Irreps of the spherical harmonics up to ``lmax``: parity ``(-1)**l``.

        >>> Irreps.spherical_harmonics(3)
        1x0e+1x1o+1x2e+1x3o
        """
        if lmax < 0:
            raise ValueError(f"lmax must be >= 0, got {lmax}")
        return Irreps([(1, Irrep(l, (-1) ** l)) for l in range(lmax + 1)])

    @property
    def dim(self) -> int:
        return sum(mul_ir.dim for mul_ir in self)

    @property
    def num_irreps(self) -> int:
        """Total multiplicity."""
        return sum(mul for mul, _ in self)

    @property
    def lmax(self) -> int:
        if len(self) == 0:
            raise ValueError("empty irreps have no lmax")
        return max(ir.l for _, ir in self)

    def slices(self) -> List[slice]:
        """Slice of the data vector covered by each entry, in order."""
        out, offset = [], 0
        for mul_ir in self:
            out.append(slice(offset, offset + mul_ir.dim))
            offset += mul_ir.dim
        return out

    def count(self, ir: IntoIrrep) -> int:
        """Total multiplicity of ``ir``."""
        ir = Irrep(ir)
        return sum(mul for mul, irrep in self if irrep == ir)

    def sorted_simplified(self) -> "Irreps":
        """Helper: entries merged by irrep and sorted ascending ``(l, p)``."""
        totals = {}
        for mul, ir in self:
            totals[ir] = totals.get(ir, 0) + mul
        return Irreps([(mul, ir) for ir, mul in sorted(totals.items(), key=lambda kv: kv[0]._key())])

    def __getitem__(self, i):
        x = super().__getitem__(i)
        return Irreps(x) if isinstance(i, slice) else x

    def __add__(self, other: IntoIrreps) -> "Irreps":
        return Irreps(tuple(self) + tuple(Irreps(other)))

    def __repr__(self) -> str:
        return "+".join(f"{mul_ir!r}" for mul_ir in self)

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            try:
                other = Irreps(other)
            except IrrepsParseError:
                return False
        return super().__eq__(other)

    def __hash__(self) -> int:
        return super().__hash__()


def _parse_irreps_str(text: str) -> List[MulIrrep]:
    if text.strip() == "":
        raise IrrepsParseError("empty irreps string at position 0")
    out = []
    offset = 0
    for part in text.split("+"):
        term = part.strip()
        pos = offset + part.index(term) if term else offset
        m = _TERM_RE.fullmatch(term)
        if m is None:
            raise IrrepsParseError(f"malformed irrep term {term!r} at position {pos}")
        mul_s, l_s, p_s = m.groups()
        if p_s not in ("e", "o"):
            p_pos = offset + part.rindex(p_s)
            raise IrrepsParseError(f"unknown parity letter {p_s!r} at position {p_pos}")
        mul = 1 if mul_s is None else int(mul_s)
        out.append(MulIrrep(mul, Irrep(int(l_s), 1 if p_s == "e" else -1)))
        offset += len(part) + 1
    return out


def parse_irreps(text: str) -> Irreps:
    """Parse an irreps string; see the module docstring for the grammar."""
    if not isinstance(text, str):
        raise IrrepsParseError(f"expected a string, got {type(text).__name__}")
    return Irreps(text)


def selection_rule(ir1: IntoIrrep, ir2: IntoIrrep) -> List[Irrep]:
    """All irreps allowed in the product of two irreps, ascending in ``l``."""
    return Irrep(ir1) * Irrep(ir2)


def sh_irreps(lmax: int) -> Irreps:
    """Irreps of the spherical harmonics up to ``lmax``."""
    return Irreps.spherical_harmonics(lmax)
