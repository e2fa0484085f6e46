import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from conelab.polyhedra import Cone, Polyhedron, union_contains, unions_equal

small = st.integers(-3, 3)


def rows(dim, lo, hi):
    return st.lists(st.lists(small, min_size=dim, max_size=dim), min_size=lo, max_size=hi)


def grid(dim, r=2):
    return list(itertools.product(range(-r, r + 1), repeat=dim))


def test_hyperplane_is_a_line():
    c = Cone.from_h(2, eq=[(0, 1)])
    assert c.rays == () and len(c.lines) == 1 and c.lines[0][1] == 0


def test_half_axis():
    c = Cone.from_h(2, eq=[(0, 1)], ineq=[(0, -1), (1, 0)])
    assert c.lines == () and c.rays == ((-1, 0),)


def test_orthant_halfspaces():
    c = Cone.from_v(2, rays=[(1, 0), (0, 1)])
    assert c == Cone.from_h(2, ineq=[(-1, 0), (0, -1)])
    assert c == Cone.orthant(2)


def test_polar_of_line_and_half_axis():
    line = Cone.from_h(2, eq=[(0, 1)])
    assert line.polar() == Cone.from_h(2, eq=[(1, 0)])
    half = Cone.from_v(2, rays=[(-1, 0)])
    assert half.polar() == Cone.from_h(2, ineq=[(-1, 0)])


def test_trivial_and_full():
    assert Cone.zero(3).is_trivial() and Cone.full(3).is_full()
    assert Cone.zero(2).polar() == Cone.full(2)


def test_projection_drops_coordinate():
    c = Cone.from_h(3, eq=[(1, -1, 0)], ineq=[(0, 0, 1)])
    assert c.project([0, 1]) == Cone.from_h(2, eq=[(1, -1)])


def test_faces_of_half_axis():
    fs = Cone.from_v(2, rays=[(-1, 0)]).faces_with_samples()
    samples = {tuple(f.sample) for f in fs}
    assert (-1, 0) in samples and (0, 0) in samples


def test_faces_of_line_cover_both_directions():
    fs = Cone.from_h(2, eq=[(0, 1)]).faces_with_samples()
    samples = {tuple(f.sample) for f in fs}
    assert {(1, 0), (-1, 0), (0, 0)} <= samples


def test_faces_of_orthant():
    fs = Cone.orthant(2).faces_with_samples()
    assert len(fs) == 4
    interior = [f for f in fs if f.face.span_dim() == 2]
    assert len(interior) == 1 and all(x > 0 for x in interior[0].sample)


def test_union_containment_needs_both_halves():
    up = Cone.from_h(2, ineq=[(0, -1)])
    down = Cone.from_h(2, ineq=[(0, 1)])
    assert union_contains([up, down], Cone.full(2))
    assert not union_contains([up], Cone.full(2))
    assert unions_equal([up, down], [Cone.full(2)])


def test_polyhedron_vertices_and_rays():
    p = Polyhedron(2, A=[(1, -1)], a=[1], B=[(-1, 0), (0, -1)], b=[0, 0])
    assert p.vertices == [(1, 0)]
    assert p.rays == [(1, 1)]
    assert not p.is_empty()
    assert Polyhedron.empty(2).is_empty()


@settings(max_examples=40, deadline=None)
@given(rows(3, 0, 4), rows(3, 0, 1))
def test_roundtrip_and_bipolar(ineq, eq):
    c = Cone.from_h(3, eq=eq, ineq=ineq)
    assert Cone.from_v(3, c.rays, c.lines) == c
    assert c.polar().polar() == c
    for x in grid(3, 1):
        inside = all(sum(a * b for a, b in zip(r, x)) == 0 for r in eq) and all(
            sum(a * b for a, b in zip(r, x)) <= 0 for r in ineq
        )
        assert c.member(x) == inside


@settings(max_examples=40, deadline=None)
@given(rows(2, 0, 3), rows(2, 0, 3))
def test_intersection_and_sum_are_dual(g1, g2):
    a = Cone.from_v(2, g1)
    b = Cone.from_v(2, g2)
    assert a.intersect(b).polar() == a.polar().sum(b.polar())
    assert a.contains(a.intersect(b)) and a.sum(b).contains(a)


@settings(max_examples=30, deadline=None)
@given(rows(3, 0, 3), st.lists(st.lists(small, min_size=3, max_size=3), min_size=2, max_size=2))
def test_image_membership(gens, M):
    c = Cone.from_v(3, gens)
    img = c.image(M)
    for g in gens:
        assert img.member(tuple(sum(M[i][j] * g[j] for j in range(3)) for i in range(2)))
    pre = img.preimage(M, 3)
    assert pre.contains(c)
