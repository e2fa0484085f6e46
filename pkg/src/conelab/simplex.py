"""Exact two-phase simplex method over the rationals.

The core routine works on raw matrices::

    minimize  c.x   subject to  A x = a,  B x <= b,  x free.

Free variables are split into positive and negative parts, every row gets
an artificial variable in phase one, and Bland's rule is used throughout so
the method terminates.  An optimal outcome carries a dual pair ``(y, z)``
with ``A^T y + B^T z = c``, ``z <= 0`` and ``a.y + b.z`` equal to the optimal
value, which is checked before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InvariantBreach, LpStatusError
from .exact import ZERO, dot, rat, solve_linear


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    point: Optional[tuple] = None
    dual_eq: Optional[tuple] = None
    dual_ineq: Optional[tuple] = None
    direction: Optional[tuple] = None

    @property
    def dual(self) -> Optional[tuple]:
        if self.status != "optimal":
            return None
        return self.dual_eq + self.dual_ineq


def _pivot(T, rhs, r, c, red=None):
    pv = T[r][c]
    if pv != 1:
        T[r] = [x / pv if x else x for x in T[r]]
        rhs[r] = rhs[r] / pv
    prow = T[r]
    nz = [j for j, x in enumerate(prow) if x]
    pr = rhs[r]
    for i in range(len(T)):
        if i != r:
            row = T[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                if pr:
                    rhs[i] -= f * pr
    if red is not None:
        f = red[c]
        if f:
            for j in nz:
                red[j] -= f * prow[j]


def _reduced(T, basis, cost, ncols):
    red = list(cost[:ncols])
    for i, bj in enumerate(basis):
        cb = cost[bj]
        if cb:
            row = T[i]
            for j in range(ncols):
                if row[j]:
                    red[j] -= cb * row[j]
    return red


def _run(T, rhs, basis, cost, allowed):
    """Minimize ``cost`` from a feasible basis; returns None or the unbounded column."""
    ncols = len(T[0]) if T else 0
    red = _reduced(T, basis, cost, ncols)
    while True:
        enter = next((j for j in range(ncols) if allowed[j] and red[j] < 0), None)
        if enter is None:
            return None
        best = None
        for i in range(len(T)):
            t = T[i][enter]
            if t > 0:
                ratio = rhs[i] / t
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return enter
        r = best[1]
        _pivot(T, rhs, r, enter, red)
        basis[r] = enter


def solve_lp(c, A, a, B, b, n: Optional[int] = None) -> LpOutcome:
    """Minimize ``c.x`` subject to ``A x = a`` and ``B x <= b`` exactly."""
    c = tuple(map(rat, c))
    n = len(c) if n is None else n
    if len(c) != n:
        raise ValueError(f"objective has {len(c)} entries for {n} variables")
    A = [tuple(map(rat, r)) for r in A]
    B = [tuple(map(rat, r)) for r in B]
    a = [rat(v) for v in a]
    b = [rat(v) for v in b]
    if len(A) != len(a) or len(B) != len(b):
        raise ValueError("row and right-hand side counts differ")
    for r in A + B:
        if len(r) != n:
            raise ValueError(f"constraint row of length {len(r)} for {n} variables")
    me, mi = len(A), len(B)
    m = me + mi
    # columns: x+ (n), x- (n), slacks (mi), artificials (m)
    ncols = 2 * n + mi + m
    T, rhs = [], []
    for i in range(m):
        row = A[i] if i < me else B[i - me]
        rr = a[i] if i < me else b[i - me]
        full = [ZERO] * ncols
        for j in range(n):
            full[j] = row[j]
            full[n + j] = -row[j]
        if i >= me:
            full[2 * n + (i - me)] = Fraction(1)
        if rr < 0:
            full = [-x for x in full]
            rr = -rr
        full[2 * n + mi + i] = Fraction(1)
        T.append(full)
        rhs.append(rr)
    basis = [2 * n + mi + i for i in range(m)]
    art0 = 2 * n + mi
    phase1 = [ZERO] * art0 + [Fraction(1)] * m
    allowed = [True] * ncols
    _run(T, rhs, basis, phase1, allowed)
    if sum((rhs[i] for i in range(m) if basis[i] >= art0), ZERO) > 0:
        return LpOutcome("infeasible")
    # drive remaining artificials out of the basis
    i = 0
    while i < len(T):
        if basis[i] >= art0:
            j = next((j for j in range(art0) if T[i][j] != 0), None)
            if j is None:
                del T[i], rhs[i], basis[i]
                continue
            _pivot(T, rhs, i, j)
            basis[i] = j
        i += 1
    allowed = [j < art0 for j in range(ncols)]
    cost = list(c) + [-v for v in c] + [ZERO] * (mi + m)
    enter = _run(T, rhs, basis, cost, allowed)
    x = [ZERO] * ncols
    for i, bj in enumerate(basis):
        x[bj] = rhs[i]
    if enter is not None:
        d = [ZERO] * ncols
        d[enter] = Fraction(1)
        for i, bj in enumerate(basis):
            d[bj] = -T[i][enter]
        direction = tuple(d[j] - d[n + j] for j in range(n))
        return LpOutcome("unbounded", direction=direction)
    point = tuple(x[j] - x[n + j] for j in range(n))
    value = dot(c, point)
    # duals from the final basis: pi . column_j = cost_j for basic j
    cols = []
    for j in basis:
        if j < n:
            cols.append(([r[j] for r in A] + [r[j] for r in B], c[j]))
        elif j < 2 * n:
            cols.append(([-r[j - n] for r in A] + [-r[j - n] for r in B], -c[j - n]))
        elif j < art0:
            k = j - 2 * n
            cols.append(([ZERO] * me + [Fraction(1) if t == k else ZERO for t in range(mi)], ZERO))
    pi = solve_linear([cc for cc, _ in cols], [v for _, v in cols], m) if cols else tuple([ZERO] * m)
    if pi is None:
        raise InvariantBreach("simplex: dual system of the optimal basis is inconsistent")
    y, z = tuple(pi[:me]), tuple(pi[me:])
    _check_certificate(c, A, a, B, b, n, point, value, y, z)
    return LpOutcome("optimal", value=value, point=point, dual_eq=y, dual_ineq=z)


def _check_certificate(c, A, a, B, b, n, x, value, y, z):
    for r, ai in zip(A, a):
        if dot(r, x) != ai:
            raise InvariantBreach("simplex: primal equality violated")
    for r, bi in zip(B, b):
        if dot(r, x) > bi:
            raise InvariantBreach("simplex: primal inequality violated")
    if any(v > 0 for v in z):
        raise InvariantBreach("simplex: dual sign violated")
    for j in range(n):
        s = sum((y[i] * A[i][j] for i in range(len(A))), ZERO) + sum(
            (z[i] * B[i][j] for i in range(len(B))), ZERO
        )
        if s != c[j]:
            raise InvariantBreach("simplex: dual equality violated")
    if dot(a, y) + dot(b, z) != value:
        raise InvariantBreach("simplex: duality gap")


def lp_solve(objective: Sequence, p) -> LpOutcome:
    """Minimize ``objective`` over the polyhedron ``p`` (uses its halfspace form)."""
    return solve_lp(objective, p.A, p.a, p.B, p.b, p.dim)


def lp_maximize(objective: Sequence, p) -> LpOutcome:
    res = lp_solve([-rat(v) for v in objective], p)
    if res.status != "optimal":
        return res
    return LpOutcome(
        "optimal",
        value=-res.value,
        point=res.point,
        dual_eq=tuple(-v for v in res.dual_eq),
        dual_ineq=tuple(-v for v in res.dual_ineq),
    )


def optimal_face(objective: Sequence, p):
    """The set of minimizers of ``objective`` over ``p``."""
    res = lp_solve(objective, p)
    if res.status != "optimal":
        raise LpStatusError(f"optimal face requested but the LP is {res.status}", res.status)
    obj = tuple(map(rat, objective))
    if not any(obj):
        return p
    return p.with_rows(A=[obj], a=[res.value])


def max_slack(dim: int, A, B, strict_rows) -> Optional[tuple]:
    """A point with ``A x = 0``, ``B x <= 0`` and ``s.x < 0`` for every strict row, if any.

    Maximizes a slack ``t <= 1`` with ``s.x + t <= 0``; strict feasibility
    holds exactly when the optimum is positive.
    """
    n = dim + 1
    Ah = [tuple(r) + (0,) for r in A]
    Bh = [tuple(r) + (0,) for r in B] + [tuple(s) + (1,) for s in strict_rows]
    Bh.append(tuple([0] * dim + [1]))
    bh = [0] * (len(Bh) - 1) + [1]
    res = solve_lp(tuple([0] * dim + [-1]), Ah, [0] * len(Ah), Bh, bh, n)
    if res.status == "optimal" and res.value < 0:
        return res.point[:dim]
    return None


def strict_point(dim: int, A, a, B, b, S, s) -> Optional[tuple]:
    """A point with ``A x = a``, ``B x <= b`` and ``S x < s`` row-wise, if any."""
    n = dim + 1
    Ah = [tuple(r) + (0,) for r in A]
    Bh = [tuple(r) + (0,) for r in B] + [tuple(r) + (1,) for r in S]
    bh = list(b) + list(s)
    Bh.append(tuple([0] * dim + [1]))
    bh.append(1)
    res = solve_lp(tuple([0] * dim + [-1]), Ah, list(a), Bh, bh, n)
    if res.status == "optimal" and (not S or res.value < 0):
        return res.point[:dim]
    return None
