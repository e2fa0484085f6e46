import pytest

from conelab.errors import DirectionNotTangent, InfeasiblePoint, NotANormal
from conelab.polyhedra import Cone

from conftest import Y2, make


def test_fixture_a_jets(pa):
    assert pa.active == (0, 1)
    assert pa.G == ((0, 1), (0, -1))


def test_fixture_c_both_active(pc):
    assert pc.active == (0, 1)


def test_not_a_normal():
    with pytest.raises(NotANormal):
        make(["-y1^2 + y2", "-y1^2 - y2"], Y2, [0, 0], [1, 0])


def test_infeasible_point():
    with pytest.raises(InfeasiblePoint):
        make(["y1 - 1"], Y2, [2, 0], [0, 0])


def test_inactive_constraint_is_dropped():
    p = make(["y1 - 1", "y2"], Y2, [0, 0], [0, 1])
    assert p.active == (1,) and p.inactive() == (0,)


def test_geometry_a(pa):
    from conelab.model import geometry

    g = geometry(pa)
    line = Cone.from_h(2, eq=[(0, 1)])
    assert g.kbar == line and g.nullspace == line


def test_geometry_b(pb):
    from conelab.model import geometry

    g = geometry(pb)
    assert g.kbar == Cone.from_v(2, rays=[(-1, 0)])
    assert g.nullspace.is_trivial()


def test_geometry_c(pc):
    from conelab.model import geometry

    g = geometry(pc)
    assert g.tlin == Cone.orthant(2, -1)
    assert g.kbar == Cone.from_v(2, rays=[(0, -1)])


def test_active_directions(pa, pb):
    from conelab.model import active_dir

    assert active_dir(pa, (-1, 0)) == (0, 1)
    assert active_dir(pa, (0, 0)) == pa.active
    assert active_dir(pb, (-1, 0)) == (0, 1)
    with pytest.raises(DirectionNotTangent):
        active_dir(pb, (1, 0))


def test_hessian_combination(pa):
    assert pa.hess((1, 1)) == ((-4, 0), (0, 0))
    assert pa.curvature((-1, 0)) == (-2, -2)
