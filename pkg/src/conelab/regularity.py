"""Constraint qualifications: LICQ, MFCQ, 2-regularity and the second-order subregularity test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from .exact import ZERO, dot, kernel, matmul, rank, transpose, vec
from .model import ProblemData, geometry
from .polyhedra import Cone

PROVEN, DISPROVEN, UNKNOWN = "Proven", "Disproven", "Unknown"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Any = None
    reason: str = ""
    label: str = ""

    @property
    def proven(self) -> bool:
        return self.status == PROVEN

    @property
    def disproven(self) -> bool:
        return self.status == DISPROVEN

    def tag(self) -> str:
        if self.status == UNKNOWN:
            return f"Unknown({self.reason})"
        return self.status

    def __str__(self):
        return f"{self.label}: {self.tag()}" if self.label else self.tag()


def kernel_cone(p: ProblemData) -> Cone:
    """``{lam | G^T lam = 0, lam >= 0 on the active set, 0 elsewhere}``."""
    l = p.l
    eq = [tuple(p.G[i][k] for i in range(l)) for k in range(p.m)]
    eq += [tuple(1 if j == i else 0 for j in range(l)) for i in p.inactive()]
    ineq = [tuple(-1 if j == i else 0 for j in range(l)) for i in p.active]
    return Cone.from_h(l, eq, ineq)


def classic_cq(p: ProblemData) -> tuple[bool, bool]:
    act = [p.G[i] for i in p.active]
    licq = rank(act, p.m) == len(act) if act else True
    mfcq = kernel_cone(p).is_trivial()
    return licq, mfcq


def two_regular(p: ProblemData, J: Sequence[int], v: Sequence) -> bool:
    """Decide whether the subfamily ``J`` is 2-regular in direction ``v``.

    Fails exactly when some ``lam != 0`` with ``G_J^T lam = 0`` has
    ``sum_i lam_i H_i v`` in the range of ``G_J^T``.
    """
    J = list(J)
    if not J:
        return True
    v = vec(v)
    GJt = [[p.G[i][k] for i in J] for k in range(p.m)]  # m x |J|
    K = kernel(GJt, len(J))
    if not K:
        return True
    hv = {i: tuple(dot(r, v) for r in p.H[i]) for i in J}
    cols = [tuple(sum((c[t] * hv[i][k] for t, i in enumerate(J)), ZERO) for k in range(p.m)) for c in K]
    M = [[cols[j][k] for j in range(len(K))] + list(GJt[k]) for k in range(p.m)]
    return rank(M, len(K) + len(J)) == len(K) + rank(GJt, len(J))


def two_licq(p: ProblemData, v: Sequence, jfam) -> Verdict:
    """Sufficient test: every maximal member of the index family is 2-regular in ``v``."""
    bad = [J for J in jfam.maximal if not two_regular(p, J, v)]
    if not bad and not jfam.truncated:
        return Verdict(PROVEN, label="2-LICQ")
    if jfam.truncated:
        return Verdict(UNKNOWN, reason="index family truncated", label="2-LICQ")
    return Verdict(UNKNOWN, witness=tuple(sorted(bad[0])), reason="sufficient condition failed", label="2-LICQ")


# ----------------------------------------------------------------------
# strict copositivity


def _det(M) -> Fraction:
    n = len(M)
    A = [list(r) for r in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _adjugate(M) -> list:
    n = len(M)
    if n == 1:
        return [[Fraction(1)]]
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * _det(minor)
    return adj


def _quad(M, x) -> Fraction:
    return dot(x, [dot(r, x) for r in M])


def strictly_copositive(M) -> tuple[bool, Optional[tuple]]:
    """Exact test of ``x^T M x > 0`` for all ``0 != x >= 0``.

    Recursion over principal submatrices: if all of order ``n-1`` pass,
    ``M`` fails iff ``det M <= 0`` and the adjugate is entrywise
    nonnegative.  On failure a witness ``x >= 0, x != 0`` with
    ``x^T M x <= 0`` is returned when one is found.
    """
    M = [[Fraction(v) for v in r] for r in M]
    n = len(M)
    for i in range(n):
        if M[i][i] <= 0:
            return False, tuple(Fraction(1) if j == i else ZERO for j in range(n))
    return _copos(M, tuple(range(n)), {})


def _copos(M, idx, memo):
    if idx in memo:
        return memo[idx]
    n = len(M)
    sub = [[M[i][j] for j in idx] for i in idx]
    k = len(idx)
    if k == 1:
        res = (sub[0][0] > 0, None if sub[0][0] > 0 else _lift(n, idx, (Fraction(1),)))
        memo[idx] = res
        return res
    for drop in range(k):
        sidx = idx[:drop] + idx[drop + 1 :]
        ok, w = _copos(M, sidx, memo)
        if not ok:
            memo[idx] = (False, w)
            return memo[idx]
    det = _det(sub)
    adj = _adjugate(sub)
    if det <= 0 and all(x >= 0 for r in adj for x in r):
        w = None
        for j in range(k):
            col = tuple(adj[i][j] for i in range(k))
            if any(col) and _quad(sub, col) <= 0:
                w = _lift(n, idx, col)
                break
        if w is None:
            w = _search_witness(sub, idx, n)
        memo[idx] = (False, w)
    else:
        memo[idx] = (True, None)
    return memo[idx]


def _lift(n, idx, x):
    out = [ZERO] * n
    for i, v in zip(idx, x):
        out[i] = v
    return tuple(out)


def _search_witness(sub, idx, n, bound: int = 6):
    k = len(sub)
    for x in itertools.product(range(bound + 1), repeat=k):
        if any(x) and _quad(sub, x) <= 0:
            return _lift(n, idx, tuple(Fraction(v) for v in x))
    return None


def _simplicial_cones(gens: list, dim_span: int) -> list:
    """Triangulate the pointed cone generated by ``gens`` into simplicial cones."""
    if len(gens) <= dim_span:
        return [list(gens)]
    c = Cone.from_v(len(gens[0]), gens)
    gens = [tuple(r) for r in c.rays]
    if len(gens) == dim_span:
        return [gens]
    apex = gens[0]
    out = []
    for row in c.ineq:
        if dot(row, apex) == 0:
            continue
        facet = [g for g in gens if dot(row, g) == 0]
        for simp in _simplicial_cones(facet, dim_span - 1):
            out.append([apex] + simp)
    return out


def _neg_on_cone(Hk, tl: Cone) -> tuple[bool, Optional[tuple]]:
    """Is ``u^T Hk u < 0`` for every nonzero ``u`` in ``tl``?"""
    gens_all = list(tl.rays) + list(tl.lines) + [tuple(-x for x in l) for l in tl.lines]
    for u in gens_all:
        if _quad(Hk, u) >= 0:
            return False, tuple(Fraction(x) for x in u)
    d = tl.span_dim()
    for signs in itertools.product((1, -1), repeat=len(tl.lines)):
        gens = list(tl.rays) + [tuple(s * x for x in l) for s, l in zip(signs, tl.lines)]
        for simp in _simplicial_cones(gens, d):
            R = [[Fraction(g[i]) for g in simp] for i in range(tl.dim)]  # dim x k
            Mneg = [[-x for x in r] for r in matmul(transpose(R, len(simp)), matmul(Hk, R))]
            ok, x = strictly_copositive(Mneg)
            if not ok:
                if x is None:
                    return False, None
                u = tuple(dot(r, x) for r in R)
                return False, u
    return True, None


def soscms(p: ProblemData) -> Verdict:
    """Second-order sufficient condition for metric subregularity, tiered.

    Tier (a) checks negative definiteness on the span of the linearized
    cone by leading principal minors; tier (b) checks strict copositivity on
    a triangulation of the cone.  Failures come with a witness ``(lam, u)``.
    """
    C = kernel_cone(p)
    if C.is_trivial():
        return Verdict(PROVEN, reason="MFCQ", label="SOSCMS")
    if C.lines:
        # C sits in the nonnegative orthant, so this cannot happen
        return Verdict(UNKNOWN, reason="kernel cone not pointed", label="SOSCMS")
    tl = geometry(p).tlin
    if tl.is_trivial():
        return Verdict(PROVEN, reason="linearized cone is {0}", label="SOSCMS")
    basis = _span_basis(tl)
    for lam in C.rays:
        lam = tuple(Fraction(x) for x in lam)
        Hk = p.hess(lam)
        if _neg_def_on(Hk, basis):
            continue
        ok, u = _neg_on_cone(Hk, tl)
        if ok:
            continue
        if u is not None and any(u) and _quad(Hk, u) >= 0:
            return Verdict(DISPROVEN, witness=(lam, u), label="SOSCMS")
        return Verdict(UNKNOWN, reason="copositivity undecided at desk tier", label="SOSCMS")
    return Verdict(PROVEN, label="SOSCMS")


def _span_basis(c: Cone) -> list:
    from .exact import row_space_basis

    return row_space_basis(list(c.rays) + list(c.lines), c.dim)


def _neg_def_on(Hk, basis) -> bool:
    k = len(basis)
    if k == 0:
        return True
    V = [[b[i] for b in basis] for i in range(len(basis[0]))]  # m x k
    A = matmul(transpose(V, k), matmul(Hk, V))
    negA = [[-x for x in r] for r in A]
    return all(_det([r[:j] for r in negA[:j]]) > 0 for j in range(1, k + 1))
