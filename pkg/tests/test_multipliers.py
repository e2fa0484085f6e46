from fractions import Fraction

import pytest

from conelab.errors import DirectionNotInCone
from conelab.multipliers import MU, POS, directional_lambda, kappa_bound, lambda_set, lambda_tilde, mbar
from conelab.polyhedra import Polyhedron



def test_lambda_set_a(pa):
    ms = lambda_set(pa)
    assert ms.extreme_points == ((1, 0),)
    assert ms.poly.rays == [(1, 1)]
    assert ms.poly == Polyhedron(2, A=[(1, -1)], a=[1], B=[(-1, 0), (0, -1)], b=[0, 0])


def test_lambda_set_b(pb):
    ms = lambda_set(pb)
    assert ms.poly == Polyhedron(3, A=[(1, -1, 0), (0, 0, 1)], a=[1, 0], B=[(-1, 0, 0), (0, -1, 0)], b=[0, 0])


def test_lambda_set_c(pc):
    assert lambda_set(pc).poly.is_singleton()
    assert lambda_set(pc).extreme_points == ((1, 0),)


def test_directional_multipliers(pa, pb):
    assert directional_lambda(pa, (-1, 0)).lam_bar == Polyhedron.point((1, 0))
    assert directional_lambda(pa, (-1, 0)).lam_e == ((1, 0),)
    assert directional_lambda(pa, (0, 0)).lam_bar == lambda_set(pa).poly
    assert directional_lambda(pb, (-1, 0)).lam_bar == Polyhedron.point((1, 0, 0))
    with pytest.raises(DirectionNotInCone):
        directional_lambda(pb, (1, 0))


def test_lambda_tilde_at_zero(pa, pb):
    assert lambda_tilde(pa, (0, 0), [(1, 0), (-1, 0)]).vertices == ((1, 0),)
    assert lambda_tilde(pb, (0, 0), [(-1, 0)]).vertices == ((1, 0, 0),)
    lt = lambda_tilde(pa, (-1, 0))
    assert lt.vertices == directional_lambda(pa, (-1, 0)).lam_e and lt.exact


@pytest.mark.parametrize("c", [0, 3, Fraction(-5, 2)])
def test_strata_fixture_a(pa, c):
    res = mbar(pa, (-1, 0), (2, c))
    assert len(res) == 1
    st = res.strata[0]
    assert st.pattern == frozenset({0}) and st.lam == (1, 0) and st.lambda_is_unique
    lam, mu = st.witness
    assert lam == (1, 0)
    assert mu[0] - mu[1] == c and mu[1] >= 0


def test_strata_empty_off_the_tangent(pa):
    assert len(mbar(pa, (-1, 0), (1, 0))) == 0


def test_strata_fixture_b_zero_direction(pb):
    res = mbar(pb, (0, 0), (1, 1))
    assert len(res) > 0
    assert all({0, 2} <= st.pattern for st in res)
    for st in res:
        lam, mu = st.witness
        assert mu[2] == 1


def test_strata_states_match_witness(pb):
    for st in mbar(pb, (0, 0), (0, 1)):
        lam, mu = st.witness
        for i, s in st.states.items():
            if s == POS:
                assert lam[i] > 0
            elif s == MU:
                assert lam[i] == 0 and mu[i] > 0
            else:
                assert lam[i] == 0 and mu[i] == 0


def test_kappa_bound(pa, pc):
    assert kappa_bound(pc) >= 1
    for p in (pa, pc):
        k = kappa_bound(p)
        for lam in lambda_set(p).extreme_points:
            assert sum(abs(x) for x in lam) <= k * sum(abs(x) for x in p.ystar)
