"""Problem data at the reference pair and the first-order cones."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DirectionNotTangent, InfeasiblePoint, InputError, NotANormal
from .exact import ZERO, dot, format_rat, rat, vec
from .polyexpr import Poly, jet2
from .polyhedra import Cone, Polyhedron
from .simplex import lp_solve


@dataclass(frozen=True)
class ProblemData:
    """Constraint system ``q(y) <= 0`` evaluated at ``ybar`` with normal ``ystar``.

    Index sets are 0-based tuples of constraint positions.
    """

    m: int
    l: int
    qvals: tuple
    G: tuple  # l rows of length m
    H: tuple  # l symmetric m x m matrices
    ybar: tuple
    ystar: tuple
    active: tuple
    names: tuple = ()
    constraints: tuple = ()
    assume_subregular: bool = False

    def hess(self, lam: Sequence) -> tuple:
        """``sum_i lam_i H_i``."""
        out = [[ZERO] * self.m for _ in range(self.m)]
        for li, Hi in zip(lam, self.H):
            li = rat(li)
            if li:
                for r in range(self.m):
                    for c in range(self.m):
                        if Hi[r][c]:
                            out[r][c] += li * Hi[r][c]
        return tuple(tuple(r) for r in out)

    def hess_v(self, lam: Sequence, v: Sequence) -> tuple:
        """``H(lam) v``."""
        Hl = self.hess(lam)
        return tuple(dot(r, v) for r in Hl)

    def curvature(self, v: Sequence) -> tuple:
        """``(v^T H_i v)_i`` for every constraint."""
        return tuple(dot(v, tuple(dot(r, v) for r in Hi)) for Hi in self.H)

    def hv_matrix(self, v: Sequence) -> tuple:
        """The ``m x l`` matrix with columns ``H_i v``, i.e. the map ``lam -> H(lam) v``."""
        cols = [tuple(dot(r, v) for r in Hi) for Hi in self.H]
        return tuple(tuple(cols[i][k] for i in range(self.l)) for k in range(self.m))

    def inactive(self) -> tuple:
        return tuple(i for i in range(self.l) if i not in self.active)


def build_problem(
    constraints: Sequence[Poly],
    ybar: Sequence,
    ystar: Sequence,
    assume_subregular: bool = False,
) -> ProblemData:
    """Evaluate the constraint jets at ``ybar`` and validate the reference pair."""
    ybar = vec(ybar)
    ystar = vec(ystar)
    if not constraints:
        raise InputError("at least one constraint is required")
    m = len(constraints[0].vars)
    if len(ybar) != m or len(ystar) != m:
        raise InputError(f"reference vectors must have {m} entries")
    qvals, G, H = [], [], []
    for i, q in enumerate(constraints):
        if len(q.vars) != m:
            raise InputError(f"constraint {i + 1} has a different variable list")
        val, grad, hess = jet2(q, ybar)
        qvals.append(val)
        G.append(grad)
        H.append(hess)
    for i, v in enumerate(qvals):
        if v > 0:
            raise InfeasiblePoint(f"constraint {i + 1} is violated at the reference point (value {format_rat(v)})")
    active = tuple(i for i, v in enumerate(qvals) if v == 0)
    p = ProblemData(
        m=m,
        l=len(constraints),
        qvals=tuple(qvals),
        G=tuple(G),
        H=tuple(H),
        ybar=ybar,
        ystar=ystar,
        active=active,
        names=tuple(constraints[0].vars),
        constraints=tuple(constraints),
        assume_subregular=assume_subregular,
    )
    if lp_solve([0] * p.l, multiplier_polyhedron(p)).status != "optimal":
        raise NotANormal("no multiplier lambda >= 0 on the active set reproduces the reference normal")
    return p


def problem_from_jets(G, H, ystar, qvals=None, ybar=None) -> ProblemData:
    """Build problem data directly from gradients and Hessians (used by generators and tests)."""
    G = tuple(vec(r) for r in G)
    H = tuple(tuple(vec(r) for r in Hi) for Hi in H)
    l = len(G)
    m = len(G[0]) if G else len(ystar)
    qvals = tuple(vec(qvals)) if qvals is not None else tuple([ZERO] * l)
    if any(v > 0 for v in qvals):
        raise InfeasiblePoint("positive constraint value")
    p = ProblemData(
        m=m,
        l=l,
        qvals=qvals,
        G=G,
        H=H,
        ybar=vec(ybar) if ybar is not None else tuple([ZERO] * m),
        ystar=vec(ystar),
        active=tuple(i for i, v in enumerate(qvals) if v == 0),
        names=tuple(f"y{i + 1}" for i in range(m)),
    )
    if lp_solve([0] * p.l, multiplier_polyhedron(p)).status != "optimal":
        raise NotANormal("reference normal is not representable")
    return p


def multiplier_polyhedron(p: ProblemData) -> Polyhedron:
    """``{lam | lam >= 0 on the active set, 0 elsewhere, G^T lam = ystar}``."""
    A, a = [], []
    for k in range(p.m):
        A.append(tuple(p.G[i][k] for i in range(p.l)))
        a.append(p.ystar[k])
    for i in p.inactive():
        A.append(tuple(Fraction(1) if j == i else ZERO for j in range(p.l)))
        a.append(ZERO)
    B = [tuple(Fraction(-1) if j == i else ZERO for j in range(p.l)) for i in p.active]
    return Polyhedron(p.l, A, a, B, [0] * len(B))


@dataclass(frozen=True)
class Geometry:
    tlin: Cone
    kbar: Cone
    nullspace: Cone


def geometry(p: ProblemData) -> Geometry:
    rows = [p.G[i] for i in p.active]
    tlin = Cone.from_h(p.m, ineq=rows)
    kbar = Cone.from_h(p.m, eq=[p.ystar] if any(p.ystar) else [], ineq=rows)
    nullspace = Cone.from_h(p.m, eq=rows)
    return Geometry(tlin, kbar, nullspace)


def active_dir(p: ProblemData, v: Sequence) -> tuple:
    """Active constraints whose gradient is orthogonal to ``v``."""
    v = vec(v)
    out = []
    for i in p.active:
        s = dot(p.G[i], v)
        if s > 0:
            raise DirectionNotTangent(f"direction increases active constraint {i + 1}")
        if s == 0:
            out.append(i)
    return tuple(out)


def in_kbar(p: ProblemData, v: Sequence) -> bool:
    v = vec(v)
    return dot(p.ystar, v) == 0 and all(dot(p.G[i], v) <= 0 for i in p.active)
