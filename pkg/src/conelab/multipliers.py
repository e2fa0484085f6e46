"""Multiplier sets, directional multipliers and the strata of the multiplier pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DirectionNotInCone, EmptyCriticalCone, InvariantBreach, LpUnbounded
from .exact import ZERO, dot, format_vec, in_span, rank, row_space_basis, solve_linear, vec
from .model import ProblemData, geometry, in_kbar, multiplier_polyhedron
from .polyhedra import Cone, Polyhedron
from .simplex import lp_maximize, lp_solve, optimal_face, solve_lp, strict_point


def support(lam: Sequence) -> tuple:
    return tuple(i for i, v in enumerate(lam) if v != 0)


@dataclass(frozen=True)
class MultiplierSet:
    poly: Polyhedron
    extreme_points: tuple
    supports: tuple


def lambda_set(p: ProblemData) -> MultiplierSet:
    """The multiplier polyhedron with its extreme points.

    Each extreme point has linearly independent support gradients; this is
    checked and a violation is reported as an invariant breach.
    """
    poly = multiplier_polyhedron(p)
    if poly.lines:
        raise InvariantBreach("multiplier set has lineality")
    pts = tuple(poly.vertices)
    sups = tuple(support(x) for x in pts)
    for x, s in zip(pts, sups):
        if rank([p.G[i] for i in s], p.m) != len(s):
            raise InvariantBreach(f"extreme multiplier {format_vec(x)} has dependent support gradients")
    return MultiplierSet(poly, pts, sups)


def lambda_bar(p: ProblemData, v: Sequence) -> Polyhedron:
    """Multipliers maximizing ``v^T H(lam) v``; the whole multiplier set when ``v = 0``."""
    v = vec(v)
    poly = multiplier_polyhedron(p)
    if not any(v):
        return poly
    curv = p.curvature(v)
    res = lp_maximize(curv, poly)
    if res.status == "unbounded":
        raise LpUnbounded("v^T H(lam) v is unbounded over the multiplier set", res.direction)
    return optimal_face([-c for c in curv], poly)


@dataclass(frozen=True)
class DirectionalMultipliers:
    value: Fraction
    lam_bar: Polyhedron
    lam_e: tuple  # extreme multipliers attaining the maximum


def directional_lambda(p: ProblemData, v: Sequence) -> DirectionalMultipliers:
    v = vec(v)
    if not in_kbar(p, v):
        raise DirectionNotInCone(f"{format_vec(v)} is not a critical direction")
    lb = lambda_bar(p, v)
    verts = tuple(lb.vertices)
    value = dot(p.curvature(v), verts[0]) if verts else ZERO
    return DirectionalMultipliers(value, lb, verts)


@dataclass(frozen=True)
class LambdaTilde:
    poly: Polyhedron
    vertices: tuple
    exact: bool
    reason: str = ""


def _probe_rays(p: ProblemData, kbar: Cone, probes: Sequence = ()) -> list:
    """Face samples of the critical cone grouped by face, then extra probes one per group."""
    groups = []
    for fs in kbar.faces_with_samples():
        if fs.face.is_trivial():
            continue
        groups.append(list(fs.samples))
    for u in probes:
        u = vec(u)
        if not any(u):
            continue
        if not kbar.member(u):
            raise DirectionNotInCone(f"probe {format_vec(u)} is not a critical direction")
        groups.append([u])
    return groups


def lambda_e_over_cone(p: ProblemData, probes: Sequence = ()) -> tuple[set, bool, bool]:
    """Union of extreme directional multipliers over nonzero critical directions.

    Returns ``(vertices, constant_on_faces, constant_overall)``.  The first
    flag tells whether every sampled face of dimension two or more gave the
    same answer at all of its samples.
    """
    kbar = geometry(p).kbar
    if kbar.is_trivial():
        raise EmptyCriticalCone("the critical cone is {0}")
    groups = _probe_rays(p, kbar, probes)
    union: set = set()
    seen = []
    face_const = True
    for g in groups:
        sets = [frozenset(directional_lambda(p, u).lam_e) for u in g]
        if any(s != sets[0] for s in sets):
            face_const = False
        for s in sets:
            union |= s
            seen.append(s)
    overall = all(s == seen[0] for s in seen)
    return union, face_const, overall


def lambda_tilde(p: ProblemData, v: Sequence, probes: Sequence = ()) -> LambdaTilde:
    """Convex hull of the extreme directional multipliers at ``v``.

    For ``v = 0`` the union runs over nonzero critical directions, sampled
    on every face of the critical cone plus any extra probes.
    """
    v = vec(v)
    if any(v):
        dm = directional_lambda(p, v)
        return LambdaTilde(Polyhedron.from_v(p.l, dm.lam_e), dm.lam_e, True)
    union, face_const, _ = lambda_e_over_cone(p, probes)
    verts = tuple(sorted(union))
    reason = "" if face_const else "extreme multipliers vary inside a sampled face"
    return LambdaTilde(Polyhedron.from_v(p.l, verts), verts, face_const, reason)


def kappa_bound(p: ProblemData) -> Fraction:
    """A constant with ``|lam|_1 <= kappa |y*|_1`` for every extreme multiplier.

    The maximum over active index sets with independent gradients of the
    1-norm of ``(G_S G_S^T)^{-1} G_S``.
    """
    best = ZERO
    act = list(p.active)
    r = rank([p.G[i] for i in act], p.m) if act else 0
    for k in range(1, r + 1):
        for S in itertools.combinations(act, k):
            GS = [p.G[i] for i in S]
            if rank(GS, p.m) != k:
                continue
            gram = [[dot(a, b) for b in GS] for a in GS]
            # columns of (G_S G_S^T)^{-1} G_S
            colsums = []
            for j in range(p.m):
                x = solve_linear(gram, [row[j] for row in GS], k)
                colsums.append(sum((abs(t) for t in x), ZERO))
            best = max(best, max(colsums))
    return best


# ----------------------------------------------------------------------
# strata of the multiplier pairs (lam, mu)

POS, MU, ZER = "pos", "mu", "zero"


@dataclass
class Stratum:
    """A relatively open piece of the multiplier pairs with a fixed sign pattern."""

    states: dict
    pattern: frozenset
    witness: tuple  # (lam, mu)
    region: Polyhedron  # closure, over (lam, mu[, lam'])
    lam: Optional[tuple]  # the multiplier when it is constant on the stratum
    lam_vertices: tuple = ()

    @property
    def lambda_is_unique(self) -> bool:
        return self.lam is not None


@dataclass
class StrataResult:
    strata: list
    truncated: bool = False
    all_unique: bool = True

    def __iter__(self):
        return iter(self.strata)

    def __len__(self):
        return len(self.strata)


def _row(n, entries):
    r = [ZERO] * n
    for j, c in entries:
        r[j] += c
    return tuple(r)


def mbar(
    p: ProblemData,
    v: Sequence,
    vstar: Optional[Sequence] = None,
    lam_region: Optional[Polyhedron] = None,
    nonzero_vstar: bool = False,
    max_enum: int = 6561,
) -> StrataResult:
    """Strata of ``{(lam, mu) | lam in Lbar(v), mu tangent to the normal cone at lam, v* = H(lam) v + G^T mu}``.

    With ``vstar=None`` the second-order direction is left free inside the
    tangent set ``H(lam') v + N(v)`` of the critical cone.  Only strata whose
    pattern is minimal for their (constant) multiplier are returned.
    """
    v = vec(v)
    l, m = p.l, p.m
    geo = geometry(p)
    lb = lambda_bar(p, v)
    vzero = not any(v)
    free = vstar is None
    use_lp = free and not vzero
    n = 3 * l if use_lp else 2 * l
    A, a, B, b = [], [], [], []
    for r, rhs in zip(lb.A, lb.a):
        A.append(tuple(r) + (ZERO,) * (n - l))
        a.append(rhs)
    for r, rhs in zip(lb.B, lb.b):
        B.append(tuple(r) + (ZERO,) * (n - l))
        b.append(rhs)
    if lam_region is not None:
        for r, rhs in zip(lam_region.A, lam_region.a):
            A.append(tuple(r) + (ZERO,) * (n - l))
            a.append(rhs)
        for r, rhs in zip(lam_region.B, lam_region.b):
            B.append(tuple(r) + (ZERO,) * (n - l))
            b.append(rhs)
    if use_lp:
        for r, rhs in zip(lb.A, lb.a):
            A.append((ZERO,) * (2 * l) + tuple(r))
            a.append(rhs)
        for r, rhs in zip(lb.B, lb.b):
            B.append((ZERO,) * (2 * l) + tuple(r))
            b.append(rhs)
    for i in p.inactive():
        A.append(_row(n, [(l + i, Fraction(1))]))
        a.append(ZERO)
    Hv = p.hv_matrix(v)  # m x l
    # expression e(z) = H(lam) v + G^T mu - H(lam') v as coefficient rows
    expr = []
    for k in range(m):
        ent = [(i, Hv[k][i]) for i in range(l)] + [(l + i, p.G[i][k]) for i in range(l)]
        if use_lp:
            ent += [(2 * l + i, -Hv[k][i]) for i in range(l)]
        expr.append(_row(n, ent))
    if not free:
        vs = vec(vstar)
        for k in range(m):
            A.append(expr[k])
            a.append(vs[k])
    else:
        nk = geo.kbar.polar()
        if not vzero:
            nk = nk.intersect(Cone.from_h(m, eq=[v]))
        for c in nk.eq:
            A.append(tuple(sum((c[k] * expr[k][j] for k in range(m)), ZERO) for j in range(n)))
            a.append(ZERO)
        for c in nk.ineq:
            B.append(tuple(sum((c[k] * expr[k][j] for k in range(m)), ZERO) for j in range(n)))
            b.append(ZERO)

    act = list(p.active)
    combos = itertools.product((POS, MU, ZER), repeat=len(act))
    total = 3 ** len(act)
    truncated = total > max_enum
    found = []
    for count, states in enumerate(combos):
        if count >= max_enum:
            break
        A2, a2, B2, b2, S, s = list(A), list(a), list(B), list(b), [], []
        for i, st in zip(act, states):
            li, mi = _row(n, [(i, Fraction(1))]), _row(n, [(l + i, Fraction(1))])
            if st == POS:
                S.append(tuple(-x for x in li))
                s.append(ZERO)
            elif st == MU:
                A2.append(li)
                a2.append(ZERO)
                S.append(tuple(-x for x in mi))
                s.append(ZERO)
            else:
                A2 += [li, mi]
                a2 += [ZERO, ZERO]
        pt = strict_point(n, A2, a2, B2, b2, S, s)
        if pt is None:
            continue
        closed = Polyhedron(n, A2, a2, B2 + S, b2 + s)
        if nonzero_vstar and not _expr_nonzero(closed, expr):
            continue
        pattern = frozenset(i for i, st in zip(act, states) if st != ZER)
        lam = _constant_lambda(closed, l)
        lam_vertices = ()
        if lam is None:
            lam_vertices = tuple(closed.image([_row(n, [(i, Fraction(1))]) for i in range(l)]).vertices)
        found.append(
            Stratum(dict(zip(act, states)), pattern, (pt[:l], pt[l : 2 * l]), closed, lam, lam_vertices)
        )
    # keep minimal patterns per constant multiplier
    keep = []
    for st in found:
        if st.lam is not None:
            dominated = any(
                o.lam == st.lam and o.pattern < st.pattern for o in found if o is not st
            )
            dup = any(o.lam == st.lam and o.pattern == st.pattern for o in keep)
            if dominated or dup:
                continue
        keep.append(st)
    return StrataResult(keep, truncated, all(st.lam is not None for st in keep))


def _constant_lambda(closed: Polyhedron, l: int) -> Optional[tuple]:
    if closed.A:
        basis = row_space_basis(closed.A, closed.dim)
        units = [_row(closed.dim, [(i, Fraction(1))]) for i in range(l)]
        if all(in_span(u, basis) for u in units):
            pt = solve_linear(closed.A, closed.a, closed.dim)
            if pt is not None:
                return tuple(pt[:l])
    out = []
    for i in range(l):
        obj = [ZERO] * closed.dim
        obj[i] = Fraction(1)
        lo = lp_solve(obj, closed)
        hi = lp_maximize(obj, closed)
        if lo.status != "optimal" or hi.status != "optimal" or lo.value != hi.value:
            return None
        out.append(lo.value)
    return tuple(out)


def _expr_nonzero(closed: Polyhedron, expr) -> bool:
    for row in expr:
        lo = lp_solve(row, closed)
        if lo.status != "optimal" or lo.value != 0:
            return True
        hi = lp_maximize(row, closed)
        if hi.status != "optimal" or hi.value != 0:
            return True
    return False


def pair_admissible(p: ProblemData, lam: Sequence, pattern: frozenset, v: Sequence, vstar: Sequence) -> bool:
    """Does some ``mu`` complete ``lam`` to a pair whose positive set lies inside ``pattern``?"""
    l, m = p.l, p.m
    lam = vec(lam)
    A, a, B, b = [], [], [], []
    rhs = [vec(vstar)[k] - dot(p.hv_matrix(v)[k], lam) for k in range(m)]
    for k in range(m):
        A.append(tuple(p.G[i][k] for i in range(l)))
        a.append(rhs[k])
    for i in range(l):
        e = _row(l, [(i, Fraction(1))])
        if i not in p.active or (lam[i] == 0 and i not in pattern):
            A.append(e)
            a.append(ZERO)
        elif lam[i] == 0:
            B.append(tuple(-x for x in e))
            b.append(ZERO)
    return solve_lp([ZERO] * l, A, a, B, b, l).status == "optimal"
