import pytest

from conelab.cones import jfamily, kcone, kcone_polar, lset, ncone_kbar, qpiece, wset
from conelab.errors import DirectionNotInCone
from conelab.model import geometry
from conelab.polyhedra import Cone, Polyhedron

LINE = Cone.from_h(2, eq=[(0, 1)])
VLINE = Cone.from_h(2, eq=[(1, 0)])


def test_index_family_a(pa):
    jf = jfamily(pa, (-1, 0))
    assert set(jf.sets) == {frozenset(), frozenset({0}), frozenset({1})}
    assert set(jf.maximal) == {frozenset({0}), frozenset({1})}


def test_index_family_b(pb):
    assert set(jfamily(pb, (-1, 0)).sets) == {frozenset(), frozenset({0}), frozenset({1})}
    assert set(jfamily(pb, (0, 0)).sets) == {frozenset({0, 1}), frozenset({0, 1, 2})}


def test_index_family_witnesses(pb):
    # each witness z attains its index set exactly
    v = (-1, 0)
    curv = pb.curvature(v)
    for J, z in jfamily(pb, v).members:
        for i in (0, 1):
            val = sum(a * b for a, b in zip(pb.G[i], z)) + curv[i]
            assert (val == 0) == (i in J) and val <= 0


def test_directional_cone(pa, pb):
    assert kcone(pa, {0}, {0}, (-1, 0)) == LINE
    assert kcone(pb, {0}, {0, 2}) == Cone.from_h(2, eq=[(0, 1)], ineq=[(1, 0)])
    for Ip, I in [({0}, {0}), (set(), {0, 1}), ({1}, {0, 1})]:
        assert kcone(pa, Ip, I, (0, 0)) == kcone(pa, Ip, I)


def test_polar_two_ways(pa, pb):
    assert kcone_polar(pa, {0}, {0}, (-1, 0)) == VLINE
    assert kcone_polar(pa, {0}, {0}, (-1, 0)) == kcone(pa, {0}, {0}, (-1, 0)).polar()
    assert kcone_polar(pb, {0}, {0}, (-1, 0)) == kcone(pb, {0}, {0}, (-1, 0)).polar()
    assert kcone_polar(pb, set(), {0, 1, 2}) == kcone(pb, set(), {0, 1, 2}).polar()


def test_trivial_q_piece(pa):
    pc = qpiece(pa, (0, 0), (0, 0), set(), set())
    assert pc.setrep == Cone.from_h(4, eq=[(1, 0, 0, 0), (0, 1, 0, 0)])


def test_q0_inside_q(pb):
    q = qpiece(pb, (-1, 0), (1, 0, 0), {0}, {0, 1}, "Q").setrep
    q0 = qpiece(pb, (-1, 0), (1, 0, 0), {0}, {0, 1}, "Q0").setrep
    assert q.contains(q0)


def test_normal_cone_of_critical_cone(pa, pb):
    assert ncone_kbar(pa, (0, 0)) == geometry(pa).kbar.polar()
    assert ncone_kbar(pa, (-1, 0)) == VLINE
    assert ncone_kbar(pb, (-1, 0)) == VLINE
    with pytest.raises(DirectionNotInCone):
        ncone_kbar(pb, (1, 0))


def test_lset_everything_when_critical_cone_trivial():
    from conftest import make, Y2

    p = make(["y1", "y2"], Y2, [0, 0], [1, 1])
    L, exact = lset(p, (0, 0), (0, 0))
    assert L == Polyhedron(2) and exact


def test_lset_fixture_a(pa):
    # -H((1,0)) w = (2, 0) for w = (1, 0), plus the polar of the critical cone
    L, exact = lset(pa, (1, 0), (1, 0))
    assert exact
    assert L.member((2, 0)) and L.member((2, 7)) and not L.member((1, 0))
    assert wset(pa, (1, 0)) == geometry(pa).kbar
