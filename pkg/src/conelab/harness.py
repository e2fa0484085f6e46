"""Random instances and the registry of cross-checked invariants."""

from __future__ import annotations

import contextlib
import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import assembly as asm
from .cones import jfamily, kcone, kcone_polar, qpiece, xi_region
from .errors import ConelabError, GenerationExhausted, InfeasibleXi, LpUnbounded
from .exact import ZERO, dot, norm1
from .model import ProblemData, active_dir, build_problem, geometry
from .multipliers import directional_lambda, kappa_bound, lambda_set, mbar
from .polyexpr import Poly
from .polyhedra import Cone, union_contains
from .regularity import classic_cq, soscms, two_regular
from .simplex import lp_maximize, lp_solve

PROFILES = ("any", "licq", "mfcq", "degenerate")


@dataclass(frozen=True)
class RandomInstance:
    seed: int
    profile: str
    problem: ProblemData


def _quadratic(names, c0, g, H) -> Poly:
    """``c0 + g.y + y^T H y / 2`` as a polynomial."""
    m = len(names)
    terms = {}
    z = (0,) * m
    if c0:
        terms[z] = Fraction(c0)
    for j in range(m):
        e = list(z)
        e[j] = 1
        if g[j]:
            terms[tuple(e)] = Fraction(g[j])
    for j in range(m):
        for k in range(j, m):
            e = list(z)
            e[j] += 1
            e[k] += 1
            c = Fraction(H[j][k], 2) if j == k else Fraction(H[j][k])
            if c:
                terms[tuple(e)] = terms.get(tuple(e), ZERO) + c
    return Poly(names, terms)


def _draw(rng: random.Random, profile: str, bound: int):
    m = rng.randint(1, 3)
    l = rng.randint(1, 3) if profile in ("licq", "mfcq") else rng.randint(1, 4)
    names = [f"y{i + 1}" for i in range(m)]
    G, Hs, vals = [], [], []
    for i in range(l):
        if profile == "degenerate" and i > 0 and rng.random() < 0.5:
            j = rng.randrange(i)
            G.append(list(G[j]))
            Hs.append([list(r) for r in Hs[j]])
            vals.append(vals[j])
            continue
        G.append([rng.randint(-bound, bound) for _ in range(m)])
        H = [[0] * m for _ in range(m)]
        if not (profile == "degenerate" and rng.random() < 0.5):
            for j in range(m):
                for k in range(j, m):
                    H[j][k] = H[k][j] = rng.randint(-bound, bound)
        Hs.append(H)
        vals.append(0 if rng.random() < 0.8 else -1)
    lam = [rng.randint(0, bound) if vals[i] == 0 else 0 for i in range(l)]
    ystar = [sum(lam[i] * G[i][k] for i in range(l)) for k in range(m)]
    polys = [_quadratic(names, vals[i], G[i], Hs[i]) for i in range(l)]
    return polys, ystar


def gen(seed: int, profile: str = "any", bound: int = 2, attempts: int = 2000) -> RandomInstance:
    """Deterministic random instance; ``ystar`` is built from a nonnegative multiplier so it is always a normal."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    rng = random.Random(seed)
    for _ in range(attempts):
        polys, ystar = _draw(rng, profile, bound)
        m = len(ystar)
        p = build_problem(polys, [0] * m, ystar)
        if not p.active:
            continue
        licq, mfcq = classic_cq(p)
        if profile == "licq" and not licq:
            continue
        if profile == "mfcq" and not mfcq:
            continue
        return RandomInstance(seed, profile, p)
    raise GenerationExhausted(f"no {profile} instance after {attempts} attempts (seed {seed})")


# ----------------------------------------------------------------------
# invariants


class CheckFailed(AssertionError):
    pass


def _require(cond, msg):
    if not cond:
        raise CheckFailed(msg)


def _sample_dirs(p: ProblemData, cone: Cone, rng: random.Random, k: int = 2) -> list:
    out = []
    for fs in cone.faces_with_samples():
        out.append(tuple(Fraction(x) for x in fs.sample))
    rng.shuffle(out)
    return out[:k] if out else [tuple([ZERO] * p.m)]


def _index_triples(p: ProblemData, rng: random.Random, top=None, k: int = 3):
    top = sorted(p.active if top is None else top)
    out = []
    for _ in range(k):
        I = [i for i in top if rng.random() < 0.6]
        Ip = [i for i in I if rng.random() < 0.5]
        out.append((frozenset(Ip), frozenset(I)))
    return out


def _random_cones(p: ProblemData):
    geo = geometry(p)
    return [geo.tlin, geo.kbar, geo.nullspace]


def check_dd_roundtrip(inst: RandomInstance, rng: random.Random):
    for c in _random_cones(inst.problem):
        back = Cone.from_v(c.dim, c.rays, c.lines)
        _require(back == c, f"generator form does not reproduce {c}")
        again = Cone.from_h(c.dim, back.eq, back.ineq)
        _require(again == c, f"halfspace form does not reproduce {c}")


def check_bipolar(inst, rng):
    for c in _random_cones(inst.problem):
        _require(c.polar().polar() == c, f"bipolar fails for {c}")
        for r in c.rays:
            for a in c.polar().rays:
                _require(dot(r, a) <= 0, "polar generator pairs positively with a ray")


def check_dual_path(inst, rng):
    p = inst.problem
    dirs = _sample_dirs(p, geometry(p).kbar, rng) + [tuple([ZERO] * p.m)]
    for v in dirs:
        top = active_dir(p, v)
        for Ip, I in _index_triples(p, rng, top):
            a = kcone_polar(p, Ip, I, v)
            b = kcone(p, Ip, I, v).polar()
            _require(a == b, f"polar by multipliers differs from direct polar at v={v}, I+={sorted(Ip)}, I={sorted(I)}")


def check_strong_duality(inst, rng):
    p = inst.problem
    ms = lambda_set(p)
    for v in _sample_dirs(p, geometry(p).tlin, rng, 3):
        curv = p.curvature(v)
        primal = lp_maximize(curv, ms.poly)
        dual = lp_solve([-x for x in p.ystar], xi_region(p, v))
        if primal.status == "optimal":
            _require(dual.status == "optimal", "primal optimal but dual not")
            _require(primal.value == dual.value, f"duality gap {primal.value} vs {dual.value}")
        else:
            _require(primal.status == "unbounded" and dual.status == "infeasible", "status mismatch")


def check_extreme_bound(inst, rng):
    p = inst.problem
    kappa = kappa_bound(p)
    ys = norm1(p.ystar)
    for lam in lambda_set(p).extreme_points:
        _require(norm1(lam) <= kappa * ys, f"extreme multiplier {lam} exceeds kappa bound {kappa}")


def check_q0_in_q(inst, rng):
    p = inst.problem
    ms = lambda_set(p)
    lam = ms.extreme_points[0]
    for v in _sample_dirs(p, geometry(p).kbar, rng):
        for Ip, I in _index_triples(p, rng, active_dir(p, v), 2):
            q = qpiece(p, v, lam, Ip, I, "Q").setrep
            q0 = qpiece(p, v, lam, Ip, I, "Q0").setrep
            _require(q.contains(q0), "Q0 piece not inside Q piece")


def check_homogeneity(inst, rng):
    p = inst.problem
    alpha = Fraction(rng.randint(1, 5), rng.randint(1, 3))
    for v in _sample_dirs(p, geometry(p).tlin, rng):
        av = tuple(alpha * x for x in v)
        _require(active_dir(p, av) == active_dir(p, v), "active index set not homogeneous")
        try:
            j1, j2 = jfamily(p, v), jfamily(p, av)
            _require(set(j1.sets) == set(j2.sets), "index family not homogeneous")
        except InfeasibleXi:
            pass
        for Ip, I in _index_triples(p, rng, active_dir(p, v), 2):
            _require(kcone(p, Ip, I, v) == kcone(p, Ip, I, av), "directional cone not homogeneous")
    for v in _sample_dirs(p, geometry(p).kbar, rng):
        av = tuple(alpha * x for x in v)
        try:
            a = directional_lambda(p, v).lam_bar
            b = directional_lambda(p, av).lam_bar
        except LpUnbounded:
            continue
        _require(a == b, "directional multipliers not homogeneous")


def check_cq_implications(inst, rng):
    p = inst.problem
    licq, mfcq = classic_cq(p)
    if licq:
        _require(mfcq, "LICQ without MFCQ")
    sos = soscms(p)
    if mfcq:
        _require(sos.proven, "MFCQ without SOSCMS")
    if sos.disproven:
        lam, u = sos.witness
        _require(any(u) and dot(u, [dot(r, u) for r in p.hess(lam)]) >= 0, "SOSCMS witness does not re-substitute")


def check_two_regular_monotone(inst, rng):
    p = inst.problem
    for v in _sample_dirs(p, geometry(p).tlin, rng):
        act = active_dir(p, v)
        for k in range(len(act) + 1):
            for J in itertools.combinations(act, k):
                if two_regular(p, J, v):
                    for J2 in itertools.combinations(J, len(J) - 1) if J else ():
                        _require(two_regular(p, J2, v), f"2-regularity not inherited by subset {J2} of {J}")


def check_strata_witness(inst, rng):
    p = inst.problem
    for v in _sample_dirs(p, geometry(p).kbar, rng):
        try:
            tp = asm.tangent_piece(p, v)
        except LpUnbounded:
            continue
        if tp.is_empty():
            continue
        vs = tp.vertices[0]
        for st in mbar(p, v, vs):
            lam, mu = st.witness
            got = tuple(a + b for a, b in zip(p.hess_v(lam, v), [sum((mu[i] * p.G[i][k] for i in range(p.l)), ZERO) for k in range(p.m)]))
            _require(got == tuple(vs), "stratum witness does not reproduce v*")
            for i in range(p.l):
                if i not in p.active:
                    _require(mu[i] == 0 and lam[i] == 0, "multiplier outside the active set")
                elif lam[i] == 0:
                    _require(mu[i] >= 0, "mu negative where lambda vanishes")


def _limiting(inst):
    return asm.full_limiting(inst.problem)


def check_sandwich(inst, rng):
    res = _limiting(inst)
    upper = res.upper.cones()
    for pc in res.lower.pieces:
        _require(union_contains(upper, pc.setrep), "lower piece outside the upper estimate")
    reg = res.parts["regular"]
    for pc in reg.pieces:
        if res.upper.pieces:
            _require(union_contains(upper, pc.setrep), "regular normal cone outside the upper estimate")


def check_licq_cross(inst, rng):
    p = inst.problem
    licq, _ = classic_cq(p)
    if not licq:
        return "skipped"
    closed = asm.limiting_licq(p)
    res = _limiting(inst)
    _require(res.lower.same_set(closed), "lower estimate differs from the closed form")
    _require(res.upper.same_set(closed), "upper estimate differs from the closed form")


def check_n2_in_n1(inst, rng):
    p = inst.problem
    geo = geometry(p)
    if geo.nullspace.is_trivial() or geo.kbar.is_trivial():
        return "skipped"
    hyp = asm.hypotheses(p)
    if not hyp.vicinity:
        return "skipped"
    pol = geo.kbar.polar()
    cands = [tuple(Fraction(x) for x in r) for r in pol.rays] + [tuple(Fraction(x) for x in l) for l in pol.lines]
    cands = [c for c in cands if any(c)]
    if not cands:
        return "skipped"
    vs = rng.choice(cands)
    n1 = asm.n1_zero(p, vs, (), hyp)
    if n1.completeness != asm.EXACT:
        return "skipped"
    n2 = asm.n2_zero(p, vs, (), hyp)
    for pc in n2.pieces:
        _require(union_contains(n1.cones(), pc.setrep), "N2 piece outside N1")


@dataclass(frozen=True)
class Invariant:
    name: str
    check: Callable
    doc: str
    profiles: tuple = PROFILES


REGISTRY: dict = {}


def register(name, check, doc, profiles=PROFILES):
    REGISTRY[name] = Invariant(name, check, doc, profiles)


register("dd_roundtrip", check_dd_roundtrip, "halfspace and generator forms reproduce each other")
register("bipolar", check_bipolar, "the polar of the polar is the cone")
register("dual_path", check_dual_path, "polar of K_{I+,I}(v) from multipliers equals the direct polar")
register("strong_duality", check_strong_duality, "curvature LP and its dual share the optimal value")
register("extreme_bound", check_extreme_bound, "extreme multipliers obey the kappa bound")
register("q0_in_q", check_q0_in_q, "Q0 pieces lie inside Q pieces")
register("homogeneity", check_homogeneity, "index sets, index families, directional cones and multipliers are positively homogeneous")
register("cq_implications", check_cq_implications, "LICQ implies MFCQ implies SOSCMS; SOSCMS witnesses re-substitute")
register("two_regular_monotone", check_two_regular_monotone, "2-regularity passes to subfamilies")
register("strata_witness", check_strata_witness, "multiplier strata witnesses reproduce v* exactly")
register("sandwich", check_sandwich, "lower estimate and regular normal cone lie inside the upper estimate")
register("licq_cross", check_licq_cross, "under LICQ the general pipeline equals the closed form", ("licq",))
register("n2_in_n1", check_n2_in_n1, "N2 pieces lie inside N1 when the nullspace is nontrivial")

DOCUMENTED_INVARIANTS = (
    "dd_roundtrip",
    "bipolar",
    "dual_path",
    "strong_duality",
    "extreme_bound",
    "q0_in_q",
    "homogeneity",
    "cq_implications",
    "two_regular_monotone",
    "strata_witness",
    "sandwich",
    "licq_cross",
    "n2_in_n1",
)
assert set(DOCUMENTED_INVARIANTS) == set(REGISTRY), "every documented invariant needs a registered check"


@dataclass
class Failure:
    invariant: str
    seed: int
    profile: str
    message: str


@dataclass
class SuiteReport:
    seed: int
    count: int
    passed: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        out = [f"property suite seed={self.seed} count={self.count} ({self.seconds:.1f}s)"]
        for name in DOCUMENTED_INVARIANTS:
            fails = [f for f in self.failures if f.invariant == name]
            status = "FAIL" if fails else "ok"
            out.append(f"  {status:4} {name}: {self.passed.get(name, 0)} passed, {self.skipped.get(name, 0)} skipped, {len(fails)} failed")
            for f in fails[:3]:
                out.append(f"       reproduce: gen({f.seed}, {f.profile!r}) -> {f.message}")
        return out

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "ok": self.ok,
            "passed": self.passed,
            "skipped": self.skipped,
            "failures": [f.__dict__ for f in self.failures],
        }


def instance_seeds(seed: int, n: int) -> list:
    """``(instance seed, profile)`` pairs; profiles rotate so every one is exercised."""
    return [(seed * 100003 + k, PROFILES[k % len(PROFILES)]) for k in range(n)]


def property_suite(seed: int = 42, n: int = 50, only: Optional[list] = None, profile: Optional[str] = None) -> SuiteReport:
    start = time.time()
    rep = SuiteReport(seed, n)
    names = list(only) if only else list(DOCUMENTED_INVARIANTS)
    for iseed, prof in instance_seeds(seed, n):
        prof = profile or prof
        inst = gen(iseed, prof)
        for name in names:
            inv = REGISTRY[name]
            if inst.profile not in inv.profiles:
                continue
            rng = random.Random(iseed * 31 + len(name))
            try:
                res = inv.check(inst, rng)
            except CheckFailed as e:
                rep.failures.append(Failure(name, iseed, inst.profile, str(e)))
                continue
            except ConelabError as e:
                rep.failures.append(Failure(name, iseed, inst.profile, f"{type(e).__name__}: {e}"))
                continue
            bucket = rep.skipped if res == "skipped" else rep.passed
            bucket[name] = bucket.get(name, 0) + 1
    rep.seconds = time.time() - start
    return rep


# ----------------------------------------------------------------------
# fault injection


@contextlib.contextmanager
def inject_fault(kind: str):
    """Temporarily break a primitive so the oracles can be seen to catch it."""
    if kind == "polar_sign":
        orig = Cone.polar

        def flipped(self):
            c = orig(self)
            return Cone.from_v(c.dim, [tuple(-x for x in r) for r in c.rays], c.lines)

        Cone.polar = flipped
        try:
            yield
        finally:
            Cone.polar = orig
    elif kind == "kappa_half":
        import conelab.harness as h

        orig = h.kappa_bound
        h.kappa_bound = lambda p: orig(p) / 4
        try:
            yield
        finally:
            h.kappa_bound = orig
    else:
        raise ValueError(f"unknown fault {kind!r}")
