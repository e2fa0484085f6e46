"""Parameterized generalized equations ``0 in F(x, y) + N(y)`` and the Aubin property of their solution map."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .assembly import EXACT, LOWER, UPPER, ConeUnion, Hypotheses, hypotheses
from .errors import InconsistentEquilibrium, InputError
from .exact import ZERO, rank, vec
from .model import ProblemData
from .polyexpr import Poly, jet2
from .polyhedra import Cone
from .regularity import DISPROVEN, PROVEN, UNKNOWN, Verdict


@dataclass(frozen=True)
class GEModel:
    F: tuple
    xbar: tuple
    problem: ProblemData
    B: tuple  # d F / d y, m x m
    C: tuple  # d F / d x, m x n

    @property
    def n(self) -> int:
        return len(self.xbar)


def build_ge(F: Sequence[Poly], xbar: Sequence, problem: ProblemData) -> GEModel:
    """Evaluate ``F`` at ``(xbar, ybar)``; its variables are the x's followed by the y's."""
    xbar = vec(xbar)
    n, m = len(xbar), problem.m
    if len(F) != m:
        raise InputError(f"F needs {m} components, got {len(F)}")
    point = xbar + tuple(problem.ybar)
    B, C = [], []
    for k, f in enumerate(F):
        if len(f.vars) != n + m:
            raise InputError(f"F component {k + 1} must be over {n + m} variables")
        val, grad, _ = jet2(f, point)
        if val != -problem.ystar[k]:
            raise InconsistentEquilibrium(
                f"F_{k + 1}(xbar, ybar) = {val} but minus the reference normal has {-problem.ystar[k]}"
            )
        C.append(tuple(grad[:n]))
        B.append(tuple(grad[n:]))
    return GEModel(tuple(F), xbar, problem, tuple(B), tuple(C))


def criterion_cone(ge: GEModel, piece: Cone) -> Cone:
    """``{b | (-B^T b, -b) in piece}``."""
    m = ge.problem.m
    M = [tuple(-ge.B[j][k] for j in range(m)) for k in range(m)]
    M += [tuple(-1 if j == k else 0 for j in range(m)) for k in range(m)]
    return piece.preimage(M, m)


def aubin_verdict(ge: GEModel, lower: ConeUnion, upper: ConeUnion, hyp: Optional[Hypotheses] = None) -> Verdict:
    """Coderivative test over the cone estimates.

    Proven when every upper piece forces ``b = 0``; Disproven when a
    certified lower piece admits ``b != 0`` and ``d F / d x`` is onto.
    """
    hyp = hyp or hypotheses(ge.problem)
    m = ge.problem.m
    upper_ok = upper.completeness in (EXACT, UPPER) and hyp.vicinity
    if upper_ok and all(criterion_cone(ge, pc.setrep).is_trivial() for pc in upper.pieces):
        return Verdict(PROVEN, label="Aubin")
    if lower.completeness in (EXACT, LOWER) and hyp.vicinity:
        for pc in lower.pieces:
            c = criterion_cone(ge, pc.setrep)
            if c.is_trivial():
                continue
            b = tuple(c.rays[0]) if c.rays else tuple(c.lines[0])
            if rank(ge.C, ge.n) == m:
                return Verdict(DISPROVEN, witness={"b": b, "piece": pc}, label="Aubin")
            return Verdict(UNKNOWN, witness={"b": b, "piece": pc}, reason="criterion fails but necessity unproven", label="Aubin")
    if not upper_ok:
        return Verdict(UNKNOWN, reason="upper estimate not certified", label="Aubin")
    return Verdict(UNKNOWN, reason="criterion fails on the upper estimate without a certified witness", label="Aubin")


def witness_point(ge: GEModel, b: Sequence) -> tuple:
    """The normal ``(-B^T b, -b)`` a witness ``b`` stands for."""
    m = ge.problem.m
    b = vec(b)
    wstar = tuple(-sum((ge.B[j][k] * b[j] for j in range(m)), ZERO) for k in range(m))
    return wstar + tuple(-x for x in b)
