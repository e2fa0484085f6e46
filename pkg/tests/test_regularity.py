import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from conelab.cones import jfamily
from conelab.model import build_problem
from conelab.polyexpr import parse_poly
from conelab.regularity import classic_cq, soscms, strictly_copositive, two_licq, two_regular

from conftest import make, Y2


def test_classic_cq(pa, pb, pc, pd):
    assert classic_cq(pa) == (False, False)
    assert classic_cq(pb) == (False, False)
    assert classic_cq(pc)[0] is True
    assert classic_cq(pd)[1] is True


def test_two_regular(pa, pb):
    assert two_regular(pa, [0], (-1, 0))
    # lam = (1, 1) kills G_J^T and sends H v to (4, 0), outside the range {0} x R
    assert two_regular(pb, [0, 1], (-1, 0))


def test_two_regular_fails_for_flat_constraint():
    p = build_problem([parse_poly("y1^3", ["y1"])], [0], [0])
    for v in [(1,), (-2,), (0,)]:
        assert not two_regular(p, [0], v)


def test_two_licq(pa, pb):
    assert two_licq(pa, (-1, 0), jfamily(pa, (-1, 0))).proven
    assert two_licq(pb, (-1, 0), jfamily(pb, (-1, 0))).proven


def test_two_licq_unknown_for_flat_constraint():
    p = build_problem([parse_poly("y1^3", ["y1"])], [0], [0])
    v = two_licq(p, (1,), jfamily(p, (1,)))
    assert not v.proven and not v.disproven


def test_soscms(pa, pd):
    assert soscms(pa).proven
    assert soscms(pd).proven and soscms(pd).reason == "MFCQ"


def test_soscms_disproven_witness_resubstitutes():
    # two opposite constraints with a convex sum: the form is positive on the critical line
    p = make(["y1^2 + y2", "y1^2 - y2"], Y2, [0, 0], [0, 1])
    v = soscms(p)
    assert v.disproven
    lam, u = v.witness
    H = p.hess(lam)
    assert any(u) and sum(u[i] * H[i][j] * u[j] for i in range(2) for j in range(2)) >= 0


def brute_copositive(M, r=3):
    n = len(M)
    for x in itertools.product(range(r + 1), repeat=n):
        if any(x) and sum(x[i] * M[i][j] * x[j] for i in range(n) for j in range(n)) <= 0:
            return False
    return True


def sym(entries, n):
    it = iter(entries)
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = next(it)
    return M


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 3).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(-3, 4), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2))))
def test_copositivity_against_grid(data):
    n, entries = data
    M = sym(entries, n)
    ok, w = strictly_copositive(M)
    if not ok:
        assert w is not None and all(x >= 0 for x in w) and any(w)
        assert sum(w[i] * M[i][j] * w[j] for i in range(n) for j in range(n)) <= 0
    else:
        # a grid point with nonpositive value would refute the certificate
        assert brute_copositive(M)


def test_copositive_known_cases():
    assert strictly_copositive([[1, -1], [-1, 2]])[0]
    assert not strictly_copositive([[1, -2], [-2, 1]])[0]
    assert strictly_copositive([[1, 5], [5, 1]])[0]
