import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scrollsys.errors import FieldTooSmallError, InvalidInputError
from scrollsys.lattice import SystemSpec, parse_spec
from scrollsys.oracle import (
    DEFAULT_PRIME,
    PRIMES,
    basis,
    check_prime,
    condition_matrix,
    effective_dim_mc,
    effective_dim_rational,
    is_special_mc,
    rank_mod_p,
    robust_report,
    sample_points,
)


def test_basis_examples():
    assert len(basis(6, 0, 4)) == 65
    assert basis(3, 0, 0).exponents == ((0, 0),)
    assert len(basis(0, 2, 3)) == 12
    with pytest.raises(InvalidInputError):
        basis(1, -1, 2)


def test_published_primes_are_prime():
    for p in PRIMES:
        assert check_prime(p) == p
    with pytest.raises(InvalidInputError):
        check_prime(2**61 + 1)
    with pytest.raises(FieldTooSmallError):
        check_prime(3, 3)


def test_matrix_shape_and_rank_example():
    s = parse_spec("L1(0,4,2^5)")
    pts = sample_points(5, DEFAULT_PRIME, random.Random(1))
    mat = condition_matrix(s, pts, DEFAULT_PRIME)
    assert mat.shape == (15, 15)
    assert rank_mod_p(mat, DEFAULT_PRIME) == 14


def test_no_points():
    rep = effective_dim_mc(parse_spec("L2(1,1)"))
    assert rep.conditions == 0 and rep.l_est == rep.h0 - 1


@pytest.mark.parametrize("spec, l, verdict", [
    ("L1(0,4,2^5)", 0, "special"),
    ("L2(0,3,2^5)", 0, "non-special"),
    ("L2(3,3,3^5)", 0, "special"),
    ("L6(0,4,3^11)", 0, "special"),
    ("L3(2,1,1^8)", 0, "non-special"),
])
def test_reports(spec, l, verdict):
    rep = effective_dim_mc(parse_spec(spec), trials=3, seed=1)
    assert rep.l_est == l and rep.verdict == verdict
    assert rep.l_est >= rep.e and rep.deficiency == rep.l_est - rep.e
    assert all(r <= min(rep.h0, rep.conditions) for r in rep.rank_per_seed)
    if verdict == "special":
        assert 0 < rep.failure_bound < 1e-30


def test_determinism():
    s = parse_spec("L2(5,4,3^7)")
    a = effective_dim_mc(s, PRIMES[1], 2, 42).to_dict()
    b = effective_dim_mc(s, PRIMES[1], 2, 42).to_dict()
    assert a == b


def test_field_robustness():
    s = parse_spec("L5(1,4,3^10)")
    assert len({effective_dim_mc(s, p, 1, 0).l_est for p in PRIMES}) == 1
    assert robust_report(s).extra.get("confirmed_primes")


def test_mult_one_never_special():
    for n in range(4):
        for a in range(4):
            for b in range(4):
                for r in range(1, 10):
                    assert is_special_mc(SystemSpec.homogeneous(n, a, b, 1, r)) == "non-special"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 5), st.integers(0, 4), st.lists(st.integers(1, 3), min_size=1, max_size=5))
def test_monotone_in_points(n, a, b, ms):
    s = SystemSpec(n, a, b, tuple(ms))
    more = SystemSpec(n, a, b, tuple(ms) + (1,))
    raised = SystemSpec(n, a, b, (ms[0] + 1,) + tuple(ms[1:]))
    l = effective_dim_mc(s, trials=1).l_est
    assert effective_dim_mc(more, trials=1).l_est <= l
    assert effective_dim_mc(raised, trials=1).l_est <= l


def test_inequality_chain():
    rng = random.Random(4)
    for _ in range(40):
        s = SystemSpec.homogeneous(rng.randint(0, 4), rng.randint(0, 6), rng.randint(0, 5), rng.randint(1, 3),
                                   rng.randint(0, 8))
        rep = effective_dim_mc(s, trials=1)
        assert rep.l_est >= rep.e >= -1


def test_characteristic_zero_cross_check():
    for spec in ["L1(0,4,2^5)", "L2(0,3,2^5)", "L2(3,2,2^4)"]:
        s = parse_spec(spec)
        assert effective_dim_rational(s) == effective_dim_mc(s).l_est


def test_bad_inputs():
    s = parse_spec("L1(0,4,2^5)")
    with pytest.raises(InvalidInputError):
        condition_matrix(s, [(1, 1)], DEFAULT_PRIME)
    with pytest.raises(InvalidInputError):
        effective_dim_mc(s, trials=0)
    with pytest.raises(FieldTooSmallError):
        effective_dim_mc(parse_spec("L1(0,4,5^2)"), p=5)
