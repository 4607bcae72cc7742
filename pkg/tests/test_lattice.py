import pytest
from hypothesis import given, strategies as st

from scrollsys.errors import InvalidInputError, OutOfRangeError, ParseError
from scrollsys.lattice import (
    BlowupClass,
    DivisorClass,
    SystemSpec,
    canonical_class,
    dimension_triple,
    effective_decomposition,
    expected_dim,
    format_system,
    h0_nef,
    intersect,
    is_ample,
    parse_spec,
    parse_system,
    riemann_roch,
    virtual_dim,
)

F = lambda n, r=0: BlowupClass(n, 1, 0, (0,) * r)
H = lambda n, r=0: BlowupClass(n, 0, 1, (0,) * r)


def test_basic_intersections():
    for n in range(6):
        assert intersect(F(n), F(n)) == 0
        assert intersect(H(n), H(n)) == n
        assert intersect(F(n), H(n)) == 1
    E = BlowupClass(2, 0, 0, (-1,))
    assert intersect(E, E) == -1


def test_gamma_self_intersection():
    for n in range(1, 8):
        g = BlowupClass(n, -n, 1)
        assert intersect(g, g) == -n


def test_canonical_class():
    assert canonical_class(3, 2) == BlowupClass(3, 1, -2, (-1, -1))
    K = canonical_class(0, 0)
    assert intersect(K, K) == 8


def test_virtual_dim_examples():
    assert virtual_dim(parse_spec("L1(0,4,2^5)")) == -1
    assert virtual_dim(parse_spec("L6(0,4,3^11)")) == -2
    assert virtual_dim(parse_spec("L0(2,2)")) == 8
    assert expected_dim(parse_spec("L6(0,4,3^11)")) == -1


def test_h0_examples():
    assert h0_nef(DivisorClass(6, 0, 4)) == 65
    assert h0_nef(DivisorClass(0, 2, 3)) == 12
    assert h0_nef(DivisorClass(3, 5, -1)) == 0
    with pytest.raises(OutOfRangeError):
        h0_nef(DivisorClass(1, -1, 2))


@given(st.integers(0, 8), st.integers(0, 30), st.integers(0, 10),
       st.lists(st.integers(0, 6), max_size=8))
def test_virtual_dim_is_riemann_roch(n, a, b, ms):
    s = SystemSpec(n, a, b, tuple(ms))
    assert virtual_dim(s) == riemann_roch(s)
    t = dimension_triple(s)
    assert t.v <= t.e


@given(st.integers(0, 6), st.integers(-5, 10), st.integers(-3, 10), st.lists(st.integers(-3, 5), max_size=5),
       st.integers(-5, 10), st.integers(-3, 10), st.lists(st.integers(-3, 5), max_size=5))
def test_intersection_symmetric_bilinear(n, a1, b1, m1, a2, b2, m2):
    x = BlowupClass(n, a1, b1, tuple(m1))
    y = BlowupClass(n, a2, b2, tuple(m2))
    assert intersect(x, y) == intersect(y, x)
    assert intersect(x + y, x) == intersect(x, x) + intersect(y, x)
    assert intersect(3 * x, y) == 3 * intersect(x, y)


def test_ample():
    assert is_ample(DivisorClass(2, 1, 1))
    assert not is_ample(DivisorClass(2, 0, 1))
    assert not is_ample(DivisorClass(0, 1, 0))


def test_effective_decomposition():
    q, res = effective_decomposition(DivisorClass(3, -4, 2))
    assert q == 2 and res == DivisorClass(3, 2, 0)


def test_format_and_parse():
    s = parse_spec("L6(0,4,3^11)")
    assert (s.n, s.a, s.b, s.mults) == (6, 0, 4, (3,) * 11)
    assert format_system(s) == "L6(0,4,3^11)"
    assert format_system(parse_spec("L0(2,2)")) == "L0(2,2)"
    assert format_system(parse_spec("L1(5,4,1^4,3^6)")) == "L1(5,4,3^6,1^4)"
    assert format_system(parse_spec("L2(1,3,2)")) == "L2(1,3,2)"
    assert parse_spec(" L3 ( 7 , 0 , 2 ^ 2 ) ") == SystemSpec(3, 7, 0, (2, 2))


@pytest.mark.parametrize("bad", ["L(0,4)", "L1(0)", "L1(0,4,3^)", "L1(0^2,4)", "L1(0,x,3)", "M1(0,4)", "L1(0,4,-2)", ""])
def test_parse_errors(bad):
    with pytest.raises(InvalidInputError):
        parse_spec(bad)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_spec("L1(0,x,3)")
    assert info.value.position > 0


def test_parse_system_allows_negative():
    c = parse_system("L6(-6,1)")
    assert c == BlowupClass(6, -6, 1)


@given(st.integers(0, 9), st.integers(0, 40), st.integers(0, 12), st.lists(st.integers(0, 7), max_size=9))
def test_round_trip(n, a, b, ms):
    s = SystemSpec(n, a, b, tuple(ms))
    assert parse_spec(format_system(s)) == s


def test_equality_ignores_order():
    assert SystemSpec(1, 2, 3, (1, 3)) == SystemSpec(1, 2, 3, (3, 1))
    assert hash(SystemSpec(1, 2, 3, (1, 3))) == hash(SystemSpec(1, 2, 3, (3, 1)))


def test_negative_multiplicity_rejected_for_systems():
    with pytest.raises(InvalidInputError):
        SystemSpec(1, 0, 1, (-1,))


def test_overflow_guard():
    big = BlowupClass(1, 2**40, 2**40)
    with pytest.raises(OverflowError):
        intersect(big, big)
