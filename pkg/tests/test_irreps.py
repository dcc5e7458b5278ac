import pytest
from hypothesis import given, strategies as st

from o3algebra import Irrep, Irreps, IrrepsParseError, parse_irreps, selection_rule, sh_irreps


def test_parse_two_term_sum():
    irreps = parse_irreps("1x0e + 1x2e")
    assert [(mul, ir.l, ir.p) for mul, ir in irreps] == [(1, 0, 1), (1, 2, 1)]


def test_parse_implicit_multiplicity():
    assert parse_irreps("1o") == Irreps([(1, Irrep(1, -1))])


def test_parse_keeps_order_and_duplicates():
    irreps = parse_irreps("1o + 1o")
    assert len(irreps) == 2
    assert irreps.dim == 6


def test_parse_dim_mixed():
    irreps = parse_irreps("64x0e + 24x1e")
    assert [(mul, ir.l) for mul, ir in irreps] == [(64, 0), (24, 1)]
    assert irreps.dim == 64 + 72


@pytest.mark.parametrize(
    "text,dim",
    [("0e", 1), ("1x0e+1x2e", 6), ("1o+1o", 6)],
)
def test_dim(text, dim):
    assert parse_irreps(text).dim == dim


def test_zero_multiplicity_roundtrips():
    irreps = parse_irreps("0x2e + 1x1o")
    assert irreps.dim == 3
    assert repr(irreps) == "0x2e+1x1o"
    assert parse_irreps(repr(irreps)) == irreps


@pytest.mark.parametrize(
    "bad",
    ["", "   ", "1x0q", "x0e", "1y0e", "0", "e", "1x0e ++ 1o", "1x0e + ", "-1x0e"],
)
def test_parse_errors(bad):
    with pytest.raises(IrrepsParseError):
        parse_irreps(bad)


def test_parse_error_names_position():
    with pytest.raises(IrrepsParseError, match="position"):
        parse_irreps("1x0e + 2q")


def test_unknown_parity_letter():
    with pytest.raises(IrrepsParseError, match="parity"):
        parse_irreps("1x0q")


def test_selection_rule_vectors():
    assert selection_rule("1o", "1o") == [Irrep("0e"), Irrep("1e"), Irrep("2e")]


def test_selection_rule_scalar():
    assert selection_rule("0e", "1o") == [Irrep("1o")]


def test_selection_rule_2e_1o():
    assert selection_rule("2e", "1o") == [Irrep("1o"), Irrep("2o"), Irrep("3o")]


@given(
    l1=st.integers(0, 6),
    l2=st.integers(0, 6),
    p1=st.sampled_from([1, -1]),
    p2=st.sampled_from([1, -1]),
)
def test_selection_rule_properties(l1, l2, p1, p2):
    out = selection_rule(Irrep(l1, p1), Irrep(l2, p2))
    assert out == selection_rule(Irrep(l2, p2), Irrep(l1, p1))
    assert len(out) == 2 * min(l1, l2) + 1
    assert all(ir.p == p1 * p2 for ir in out)
    assert [ir.l for ir in out] == list(range(abs(l1 - l2), l1 + l2 + 1))


def test_sh_irreps():
    assert repr(sh_irreps(0)) == "1x0e"
    assert repr(sh_irreps(3)) == "1x0e+1x1o+1x2e+1x3o"


@pytest.mark.parametrize("lmax", range(7))
def test_sh_irreps_dim(lmax):
    assert sh_irreps(lmax).dim == (lmax + 1) ** 2


irrep_terms = st.tuples(st.integers(0, 99), st.integers(0, 9), st.sampled_from(["e", "o"]))


@given(st.lists(irrep_terms, min_size=1, max_size=6))
def test_format_parse_roundtrip(terms):
    text = " + ".join(f"{mul}x{l}{p}" for mul, l, p in terms)
    irreps = parse_irreps(text)
    assert parse_irreps(repr(irreps)) == irreps
    assert repr(parse_irreps(repr(irreps))) == repr(irreps)


def test_whitespace_normalization():
    assert parse_irreps("  2x1o+ 1x0e ") == parse_irreps("2x1o + 1x0e")


def test_slices():
    assert parse_irreps("2x0e + 1x1o").slices() == [slice(0, 2), slice(2, 5)]


def test_count():
    assert parse_irreps("2x0e + 3x1o + 1x0e").count("0e") == 3


def test_sorted_simplified():
    assert repr(parse_irreps("1x2e + 1x0e + 2x2e + 1x0o").sorted_simplified()) == "1x0e+1x0o+3x2e"


def test_irrep_dim():
    assert Irrep("0e").dim == 1
    assert Irrep("3o").dim == 7


def test_irrep_ordering():
    assert Irrep("0e") < Irrep("0o") < Irrep("1e") < Irrep("1o")


def test_irreps_concatenation():
    assert repr(Irreps("1x0e") + "2x1o") == "1x0e+2x1o"


def test_irreps_lmax_and_num_irreps():
    irreps = Irreps("2x0e + 3x2o + 1x1e")
    assert irreps.lmax == 2
    assert irreps.num_irreps == 6
    with pytest.raises(ValueError):
        Irreps([]).lmax
