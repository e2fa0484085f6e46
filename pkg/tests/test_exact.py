from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conelab.exact import format_rat, kernel, matvec, parse_rat, rank, rank_kernel, rref, solve_linear

small = st.integers(-4, 4)


def mats(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_rank_kernel_identity():
    r, K = rank_kernel([[1, 0], [0, 1]])
    assert r == 2 and K == []


def test_rank_kernel_fixture_gradients():
    r, K = rank_kernel([[0, 1], [0, -1]])
    assert r == 1
    assert len(K) == 1 and K[0][1] == 0 and K[0][0] != 0


def test_rank_kernel_zero():
    r, K = rank_kernel([[0, 0]] * 3, 2)
    assert r == 0 and len(K) == 2


def test_solve_identity():
    assert solve_linear([[1, 0], [0, 1]], [3, Fraction(-1, 2)]) == (3, Fraction(-1, 2))


def test_solve_consistent_rank_deficient():
    x = solve_linear([[0, 1], [0, -1]], [1, -1])
    assert x is not None and matvec([[0, 1], [0, -1]], x) == (1, -1)


def test_solve_inconsistent():
    assert solve_linear([[0, 1], [0, -1]], [1, 1]) is None


@pytest.mark.parametrize("text,val", [("3", 3), ("-2/6", Fraction(-1, 3)), (" 5/10 ", Fraction(1, 2))])
def test_parse_rat(text, val):
    assert parse_rat(text) == val


@pytest.mark.parametrize("text", ["1/0", "0.25", "", "x"])
def test_parse_rat_rejects(text):
    with pytest.raises(ValueError):
        parse_rat(text)


def test_format_rat_roundtrip():
    for x in (Fraction(7, 3), Fraction(-2), Fraction(0)):
        assert parse_rat(format_rat(x)) == x


@given(mats(3, 4))
def test_rank_nullity(M):
    r, K = rank_kernel(M, 4)
    assert r + len(K) == 4
    for k in K:
        assert all(v == 0 for v in matvec(M, k))


@given(mats(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solution_substitutes(M, x):
    b = matvec(M, x)
    y = solve_linear(M, b)
    assert y is not None and matvec(M, y) == b


@given(mats(3, 3))
def test_rref_idempotent(M):
    R, piv = rref(M, 3)
    R2, piv2 = rref(R, 3)
    assert piv == piv2 and [tuple(r) for r in R] == [tuple(r) for r in R2]
    assert len(kernel(M, 3)) == 3 - rank(M, 3)
