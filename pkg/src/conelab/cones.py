"""Directional polyhedral constructs: index families, the cones K_{I+,I}(v), the pieces Q and Q0,
and the building blocks of the regular normal cone estimate."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DirectionNotInCone, InfeasibleXi, LpStatusError
from .exact import ZERO, dot, format_vec, sub, vec
from .model import ProblemData, active_dir, geometry, in_kbar
from .multipliers import lambda_bar, lambda_tilde
from .polyhedra import Cone, Polyhedron
from .simplex import lp_solve, optimal_face, strict_point


@dataclass
class JFamily:
    direction: tuple
    members: list  # (J, witness z)
    maximal: list
    xi: Polyhedron
    zbar: Optional[Polyhedron] = None
    truncated: bool = False

    @property
    def sets(self) -> list:
        return [J for J, _ in self.members]


def xi_region(p: ProblemData, v: Sequence) -> Polyhedron:
    """``{z | G_i z + v^T H_i v <= 0 for active i}``."""
    curv = p.curvature(v)
    return Polyhedron(p.m, B=[p.G[i] for i in p.active], b=[-curv[i] for i in p.active])


def jfamily(p: ProblemData, v: Sequence, max_enum: int = 4096) -> JFamily:
    """All index sets ``J(z)`` achieved by points of the second-order feasible region."""
    v = vec(v)
    act_v = active_dir(p, v)
    curv = p.curvature(v)
    xi = xi_region(p, v)
    if lp_solve([0] * p.m, xi).status == "infeasible":
        raise InfeasibleXi(f"second-order region is empty for direction {format_vec(v)}")
    others = [i for i in p.active if i not in act_v]
    B0 = [p.G[i] for i in others]
    b0 = [-curv[i] for i in others]
    members = []
    truncated = False
    count = 0
    for k in range(len(act_v) + 1):
        for J in itertools.combinations(act_v, k):
            count += 1
            if count > max_enum:
                truncated = True
                break
            rest = [i for i in act_v if i not in J]
            z = strict_point(
                p.m,
                [p.G[i] for i in J],
                [-curv[i] for i in J],
                B0,
                b0,
                [p.G[i] for i in rest],
                [-curv[i] for i in rest],
            )
            if z is not None:
                members.append((frozenset(J), z))
        if truncated:
            break
    sets = [J for J, _ in members]
    maximal = [J for J in sets if not any(J < K for K in sets)]
    zbar = None
    try:
        zbar = optimal_face([-x for x in p.ystar], xi)
    except LpStatusError:
        zbar = None
    return JFamily(v, members, maximal, xi, zbar, truncated)


def _sel(n, i, c=1):
    return tuple(Fraction(c) if j == i else ZERO for j in range(n))


def kcone(p: ProblemData, Iplus, I, v: Optional[Sequence] = None) -> Cone:
    """``K_{I+,I}``; with ``v`` the projection of the lifted ``(w, z)`` system onto ``w``."""
    Iplus, I = sorted(Iplus), sorted(I)
    if not set(Iplus) <= set(I) or not set(I) <= set(p.active):
        raise ValueError("need I+ within I within the active set")
    eq = [p.G[i] for i in Iplus]
    ineq = [p.G[i] for i in I if i not in Iplus]
    if v is None or not any(vec(v)):
        return Cone.from_h(p.m, eq, ineq)
    v = vec(v)
    m = p.m
    zero = (ZERO,) * m
    E = [tuple(r) + zero for r in eq]
    N = [tuple(r) + zero for r in ineq]
    for i in I:
        row = tuple(dot(r, v) for r in p.H[i]) + tuple(p.G[i])
        (E if i in Iplus else N).append(row)
    return Cone.from_h(2 * m, E, N).project(range(m))


def param_cone(p: ProblemData, Iplus, I) -> Cone:
    """``P_{I+,I}``: zero off ``I``, nonnegative on ``I \\ I+``, free on ``I+``."""
    l = p.l
    eq = [_sel(l, i) for i in range(l) if i not in I]
    ineq = [_sel(l, i, -1) for i in I if i not in Iplus]
    return Cone.from_h(l, eq, ineq)


def kcone_polar(p: ProblemData, Iplus, I, v: Optional[Sequence] = None) -> Cone:
    """Polar of ``K_{I+,I}(v)`` built from multipliers: ``{G^T mu + H(nu) v | mu, nu in P, G^T nu = 0}``."""
    l, m = p.l, p.m
    P = param_cone(p, Iplus, I)
    if v is None or not any(vec(v)):
        Gt = [[p.G[i][k] for i in range(l)] for k in range(m)]
        return P.image(Gt)
    v = vec(v)
    zl = (ZERO,) * l
    eq = [tuple(r) + zl for r in P.eq] + [zl + tuple(r) for r in P.eq]
    eq += [zl + tuple(p.G[i][k] for i in range(l)) for k in range(m)]
    ineq = [tuple(r) + zl for r in P.ineq] + [zl + tuple(r) for r in P.ineq]
    lifted = Cone.from_h(2 * l, eq, ineq)
    Hv = p.hv_matrix(v)
    M = [tuple(p.G[i][k] for i in range(l)) + tuple(Hv[k]) for k in range(m)]
    return lifted.image(M)


ORIGINS = ("LICQ", "Directional", "N1", "N2", "Regular")


@dataclass(frozen=True)
class ConePiece:
    """A polyhedral cone in ``(w*, w)`` coordinates with the data that produced it."""

    setrep: Cone
    origin: str
    v: Optional[tuple] = None
    lam: Optional[tuple] = None
    iplus: Optional[frozenset] = None
    index: Optional[frozenset] = None

    @property
    def dim(self) -> int:
        return self.setrep.dim

    def provenance(self) -> dict:
        out = {"origin": self.origin}
        if self.v is not None:
            out["v"] = self.v
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.iplus is not None:
            out["iplus"] = tuple(sorted(i + 1 for i in self.iplus))
        if self.index is not None:
            out["I"] = tuple(sorted(i + 1 for i in self.index))
        return out


def graph_piece(p: ProblemData, lam: Sequence, wcone: Cone, polar: Cone) -> Cone:
    """``{(w*, w) | w in wcone, w* + H(lam) w in polar}``."""
    m = p.m
    Hl = p.hess(lam)
    zero = (ZERO,) * m
    eq = [zero + tuple(r) for r in wcone.eq]
    ineq = [zero + tuple(r) for r in wcone.ineq]
    for a in polar.eq:
        eq.append(tuple(a) + tuple(sum((a[k] * Hl[k][j] for k in range(m)), ZERO) for j in range(m)))
    for a in polar.ineq:
        ineq.append(tuple(a) + tuple(sum((a[k] * Hl[k][j] for k in range(m)), ZERO) for j in range(m)))
    return Cone.from_h(2 * m, eq, ineq)


def qpiece(p: ProblemData, v: Sequence, lam: Sequence, Iplus, I, variant: str = "Q", origin: str = "Directional") -> ConePiece:
    v = vec(v)
    lam = vec(lam)
    if any(x < 0 for x in lam) or any(lam[i] for i in p.inactive()):
        raise ValueError("multiplier must be nonnegative and supported on the active set")
    K = kcone(p, Iplus, I, v)
    if variant == "Q":
        pol = K.polar()
    elif variant == "Q0":
        pol = kcone_polar(p, Iplus, I, None)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return ConePiece(graph_piece(p, lam, K, pol), origin, v, lam, frozenset(Iplus), frozenset(I))


def ncone_kbar(p: ProblemData, v: Sequence) -> Cone:
    """Normal cone of the critical cone at ``v``."""
    v = vec(v)
    if not in_kbar(p, v):
        raise DirectionNotInCone(f"{format_vec(v)} is not a critical direction")
    pol = geometry(p).kbar.polar()
    if not any(v):
        return pol
    return pol.intersect(Cone.from_h(p.m, eq=[v]))


def wset(p: ProblemData, v: Sequence) -> Cone:
    """Critical directions ``w`` with ``w^T H(lam1 - lam2) v = 0`` over the directional multipliers."""
    v = vec(v)
    kbar = geometry(p).kbar
    lb = lambda_bar(p, v)
    verts = lb.vertices
    diffs = [sub(x, verts[0]) for x in verts[1:]] + list(lb.rays) + list(lb.lines)
    rows = [p.hess_v(d, v) for d in diffs]
    rows = [r for r in rows if any(r)]
    if not rows:
        return kbar
    return kbar.intersect(Cone.from_h(p.m, eq=rows))


def lset(p: ProblemData, v: Sequence, w: Sequence, probes: Sequence = ()) -> tuple[Polyhedron, bool]:
    """``conv{-H(lam) w | lam extreme in the tilde set} + kbar polar``, or everything when ``kbar = {0}``.

    Returns the set and whether the multiplier hull behind it is exact.
    """
    kbar = geometry(p).kbar
    if kbar.is_trivial():
        return Polyhedron(p.m), True
    lt = lambda_tilde(p, v, probes)
    w = vec(w)
    pts = [tuple(-x for x in p.hess_v(lam, w)) for lam in lt.vertices]
    return Polyhedron.from_v(p.m, pts).plus_cone(kbar.polar()), lt.exact
