import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from conelab.cones import xi_region
from conelab.multipliers import lambda_set
from conelab.polyhedra import Polyhedron
from conelab.simplex import lp_maximize, lp_solve, optimal_face, solve_lp, strict_point

small = st.integers(-3, 3)


def test_curvature_lp_on_multipliers(pa):
    ms = lambda_set(pa)
    v = (-1, 0)
    res = lp_solve([-x for x in pa.curvature(v)], ms.poly)
    assert res.status == "optimal"
    assert res.value == 2 and res.point == (1, 0)


def test_empty_is_infeasible():
    assert lp_solve([0], Polyhedron.empty(1)).status == "infeasible"


def test_second_order_region_lp(pa):
    res = lp_solve([0, -1], xi_region(pa, (-1, 0)))
    assert res.status == "optimal" and res.value == -2 and res.point[1] == 2


def test_optimal_face_is_single_multiplier(pa):
    face = optimal_face([-x for x in pa.curvature((-1, 0))], lambda_set(pa).poly)
    assert face.vertices == [(1, 0)] and face.rays == []


def test_constant_objective_face_is_whole_set(pa):
    poly = lambda_set(pa).poly
    assert optimal_face([0, 0], poly) is poly


def test_unbounded_direction():
    res = solve_lp([-1, 0], [], [], [(0, 1)], [1], 2)
    assert res.status == "unbounded"
    assert res.direction[0] > 0


def test_strict_point():
    pt = strict_point(2, [], [], [], [], [(-1, 0), (0, -1)], [0, 0])
    assert pt[0] > 0 and pt[1] > 0
    assert strict_point(1, [], [], [], [], [(1,), (-1,)], [0, 0]) is None


def brute_min(c, B, b, r=4):
    best = None
    for x in itertools.product(range(-r, r + 1), repeat=len(c)):
        if all(sum(p * q for p, q in zip(row, x)) <= bi for row, bi in zip(B, b)):
            v = sum(p * q for p, q in zip(c, x))
            best = v if best is None else min(best, v)
    return best


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=2, max_size=2), st.lists(st.lists(small, min_size=2, max_size=2), min_size=1, max_size=4), st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_against_boxed_brute_force(c, B, b):
    # a box keeps the LP bounded and its integer vertices let a grid search find the optimum
    B = B + [(1, 0), (-1, 0), (0, 1), (0, -1)]
    b = b[: len(B) - 4] + [2, 2, 2, 2]
    res = solve_lp(c, [], [], B, b, 2)
    brute = brute_min(c, B, b)
    if brute is None:
        assert res.status == "infeasible"
        return
    assert res.status == "optimal"
    assert res.value <= brute
    for row, bi in zip(B, b):
        assert sum(p * q for p, q in zip(row, res.point)) <= bi
    y = res.dual_ineq
    assert all(v <= 0 for v in y)
    assert sum(v * bi for v, bi in zip(y, b)) == res.value


def test_maximize_flips_duals(pa):
    res = lp_maximize([1, 1], Polyhedron(2, B=[(1, 0), (0, 1)], b=[Fraction(1, 2), 3]))
    assert res.value == Fraction(7, 2)
