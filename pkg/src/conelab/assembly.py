"""Cone unions for the graph of the regular normal cone map: tangent cone, regular and limiting normals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cones import (
    ConePiece,
    graph_piece,
    jfamily,
    kcone,
    ncone_kbar,
    qpiece,
)
from .errors import InfeasibleXi, NotLicq
from .exact import ZERO, sub, vec
from .model import ProblemData, geometry, in_kbar
from .multipliers import lambda_bar, lambda_e_over_cone, lambda_set, lambda_tilde, mbar
from .polyhedra import Cone, Polyhedron, union_contains, unions_equal
from .regularity import PROVEN, Verdict, classic_cq, soscms, two_licq

EXACT, LOWER, UPPER, UNKNOWN_C = "Exact", "LowerEstimate", "UpperEstimate", "Unknown"


@dataclass
class ConeUnion:
    pieces: list
    completeness: str
    reason: str = ""
    log: list = field(default_factory=list)

    def cones(self) -> list:
        return [pc.setrep for pc in self.pieces]

    def is_empty(self) -> bool:
        return not self.pieces

    def tag(self) -> str:
        return f"Unknown({self.reason})" if self.completeness == UNKNOWN_C else self.completeness

    def member(self, x: Sequence) -> bool:
        return any(pc.setrep.member(x) for pc in self.pieces)

    def contains_cone(self, c: Cone) -> bool:
        return union_contains(self.cones(), c)

    def same_set(self, other: "ConeUnion") -> bool:
        if not self.pieces or not other.pieces:
            return not self.pieces and not other.pieces
        return unions_equal(self.cones(), other.cones())


def normalize_pieces(pieces: Sequence[ConePiece], prune: bool = True) -> list:
    """Deduplicate by canonical form and, optionally, drop pieces inside another piece."""
    uniq: dict = {}
    for pc in pieces:
        uniq.setdefault(pc.setrep, pc)
    out = sorted(uniq.values(), key=lambda pc: pc.setrep)
    if not prune:
        return out
    keep = []
    for i, pc in enumerate(out):
        if any(j != i and other.setrep.contains(pc.setrep) for j, other in enumerate(out)):
            continue
        keep.append(pc)
    return keep


# ----------------------------------------------------------------------
# hypotheses and probes


@dataclass
class Hypotheses:
    licq: bool
    mfcq: bool
    sos: Verdict
    subregular: bool
    vicinity: bool

    def log(self) -> list:
        out = [
            Verdict(PROVEN if self.licq else "Disproven", label="LICQ"),
            Verdict(PROVEN if self.mfcq else "Disproven", label="MFCQ"),
            self.sos,
        ]
        if self.subregular and not self.sos.proven:
            out.append(Verdict(PROVEN, reason="assumed by user", label="subregularity"))
        return out


def hypotheses(p: ProblemData) -> Hypotheses:
    licq, mfcq = classic_cq(p)
    sos = soscms(p)
    return Hypotheses(licq, mfcq, sos, sos.proven or p.assume_subregular, sos.proven)


@dataclass
class ProbeGroup:
    face: Optional[Cone]
    samples: list


def probe_groups(c: Cone, extra: Sequence = (), include_zero: bool = False) -> list:
    groups = []
    for fs in c.faces_with_samples():
        if fs.face.is_trivial():
            if include_zero:
                groups.append(ProbeGroup(fs.face, [tuple([Fraction(0)] * c.dim)]))
            continue
        groups.append(ProbeGroup(fs.face, [tuple(Fraction(x) for x in s) for s in fs.samples]))
    for u in extra:
        u = vec(u)
        if any(u) and c.member(u):
            groups.append(ProbeGroup(None, [u]))
    return groups


# ----------------------------------------------------------------------
# tangent cone


def tangent_piece(p: ProblemData, v: Sequence) -> Polyhedron:
    """``{H(lam) v | lam in Lbar(v)} + N(v)`` in ``v*`` coordinates; empty when ``v`` is not critical."""
    v = vec(v)
    if not in_kbar(p, v):
        return Polyhedron.empty(p.m)
    lb = lambda_bar(p, v)
    img = lb.image(p.hv_matrix(v))
    return img.plus_cone(ncone_kbar(p, v))


def tangent_graph(p: ProblemData, probes: Sequence = (), hyp: Optional[Hypotheses] = None) -> ConeUnion:
    """Tangent cone to the graph as cones in ``(v, v*)`` coordinates, one per sampled face."""
    hyp = hyp or hypotheses(p)
    m = p.m
    kbar = geometry(p).kbar
    zero = (ZERO,) * m
    pol = kbar.polar()
    pieces = [ConePiece(Cone.from_v(2 * m, [zero + tuple(r) for r in pol.rays], [zero + tuple(l) for l in pol.lines]), "Tangent", v=zero)]
    exact = True
    for g in probe_groups(kbar, probes):
        per_sample = []
        for v in g.samples:
            lb = lambda_bar(p, v)
            per_sample.append((v, tuple(lb.vertices), tuple(lb.rays)))
        lam_sets = {(vs, rs) for _, vs, rs in per_sample}
        gens = list(g.face.rays) if g.face is not None else [per_sample[0][0]]
        N = ncone_kbar(p, g.samples[0])
        if len(gens) == 1 or (len(lam_sets) == 1 and len(per_sample[0][1]) == 1 and not per_sample[0][2]):
            rays, lines = [], []
            vs, rs = per_sample[0][1], per_sample[0][2]
            for f in gens:
                for lam in vs:
                    rays.append(tuple(f) + p.hess_v(lam, f))
            f0 = gens[0]
            for r in rs:
                rays.append(zero + p.hess_v(r, f0))
            rays += [zero + tuple(r) for r in N.rays]
            lines += [zero + tuple(l) for l in N.lines]
            pieces.append(ConePiece(Cone.from_v(2 * m, rays, lines), "Tangent", v=tuple(g.samples[0])))
        else:
            exact = False
            for f_lam in per_sample[0][1]:
                rays = [tuple(f) + p.hess_v(f_lam, f) for f in gens]
                rays += [zero + tuple(r) for r in N.rays]
                pieces.append(
                    ConePiece(Cone.from_v(2 * m, rays, [zero + tuple(l) for l in N.lines]), "Tangent", v=tuple(g.samples[0]), lam=f_lam)
                )
    comp = EXACT if (exact and hyp.vicinity) else LOWER
    return ConeUnion(normalize_pieces(pieces), comp, log=hyp.log())


# ----------------------------------------------------------------------
# regular normal cone


def _licq_multiplier(p: ProblemData) -> tuple:
    pts = lambda_set(p).extreme_points
    return pts[0]


def regular_normal_graph(p: ProblemData, probes: Sequence = (), hyp: Optional[Hypotheses] = None) -> ConeUnion:
    """Regular normal cone to the graph at the reference pair."""
    hyp = hyp or hypotheses(p)
    geo = geometry(p)
    kbar = geo.kbar
    m = p.m
    if hyp.licq:
        lam = _licq_multiplier(p)
        pc = ConePiece(graph_piece(p, lam, kbar, kbar.polar()), "Regular", lam=lam)
        return ConeUnion([pc], EXACT, log=hyp.log())
    if not hyp.subregular:
        return ConeUnion([], UNKNOWN_C, "metric subregularity not established", hyp.log())

    reasons = []
    wrows = []
    groups = probe_groups(geo.nullspace, (), include_zero=True)
    lam_sets: list = []
    for g in groups:
        data = []
        for v in g.samples:
            lb = lambda_bar(p, v)
            verts = lb.vertices
            diffs = [sub(x, verts[0]) for x in verts[1:]] + list(lb.rays) + list(lb.lines)
            data.append(frozenset(diffs))
        if len(set(data)) > 1:
            reasons.append("directional multipliers vary inside a nullspace face")
        gens = list(g.face.rays) if (g.face is not None and len(set(data)) == 1) else list(g.samples)
        for diffs in set(data):
            for d in diffs:
                for f in gens:
                    r = p.hess_v(d, f)
                    if any(r):
                        wrows.append(r)
        if kbar.is_trivial():
            continue
        for v in g.samples:
            lt = lambda_tilde(p, v, probes)
            if not lt.exact:
                reasons.append(lt.reason)
            lam_sets.append(frozenset(lt.vertices))
    W = kbar.intersect(Cone.from_h(m, eq=wrows)) if wrows else kbar
    zero = (ZERO,) * m
    cone = Cone.from_h(2 * m, [zero + tuple(r) for r in W.eq], [zero + tuple(r) for r in W.ineq])
    pol = kbar.polar()
    relaxed = False
    for S in set(lam_sets):
        S = sorted(S)
        if len(S) == 1:
            cone = cone.intersect(graph_piece(p, S[0], Cone.full(m), pol))
        else:
            relaxed = True
            cone = cone.intersect(_lifted_l(p, S, pol))
    if relaxed:
        reasons.append("convex multiplier hull relaxed by lifting")
    iplus_all = set()
    ms = lambda_set(p)
    for x in list(ms.extreme_points) + list(ms.poly.rays):
        iplus_all |= {i for i, t in enumerate(x) if t != 0}
    cond_a = iplus_all == set(p.active)
    cond_b = False
    if not kbar.is_trivial():
        _, face_const, overall = lambda_e_over_cone(p, probes)
        cond_b = face_const and overall
    else:
        cond_b = True
    exact = hyp.vicinity and (cond_a or cond_b) and not reasons
    lam_note = sorted(set(lam_sets))[0] if len(set(lam_sets)) == 1 and len(sorted(set(lam_sets))[0]) == 1 else None
    pc = ConePiece(cone, "Regular", lam=(sorted(lam_note)[0] if lam_note else None))
    comp = EXACT if exact else UPPER
    why = "; ".join(sorted(set(reasons)))
    if not exact and not reasons:
        why = "equality conditions for the regular normal estimate not met"
    return ConeUnion([pc], comp, why if comp != EXACT else "", hyp.log())


def _lifted_l(p: ProblemData, S: list, pol: Cone) -> Cone:
    """Outer bound of ``{(w*, w) | w* + H(lam) w in pol for some lam in conv S}``."""
    m, k = p.m, len(S)
    n = 2 * m + k * m
    eq, ineq = [], []
    # sum of u_j equals w
    for c in range(m):
        row = [ZERO] * n
        row[m + c] = Fraction(-1)
        for j in range(k):
            row[2 * m + j * m + c] = Fraction(1)
        eq.append(tuple(row))
    Hs = [p.hess(lam) for lam in S]
    for rows, out in ((pol.eq, eq), (pol.ineq, ineq)):
        for a in rows:
            row = [ZERO] * n
            for c in range(m):
                row[c] = Fraction(a[c])
            for j in range(k):
                for c in range(m):
                    row[2 * m + j * m + c] = sum((a[r] * Hs[j][r][c] for r in range(m)), ZERO)
            out.append(tuple(row))
    return Cone.from_h(n, eq, ineq).project(range(2 * m))


# ----------------------------------------------------------------------
# directional pieces


@dataclass
class PieceBatch:
    pieces: list
    unique: bool = True
    truncated: bool = False
    two_licq: Optional[Verdict] = None
    empty_reason: str = ""


def _pieces_from_strata(p, v, strata, jfam, variant, origin, cache) -> list:
    out = []
    sets = jfam.sets
    for st in strata:
        lams = [st.lam] if st.lam is not None else list(st.lam_vertices)
        for J in sets:
            if not st.pattern <= J:
                continue
            free = sorted(J - st.pattern)
            for k in range(len(free) + 1):
                for extra in itertools.combinations(free, k):
                    I = st.pattern | frozenset(extra)
                    rest = sorted(I - st.pattern)
                    for k2 in range(len(rest) + 1):
                        for ex2 in itertools.combinations(rest, k2):
                            Ip = st.pattern | frozenset(ex2)
                            for lam in lams:
                                key = (tuple(v), tuple(lam), Ip, I, variant)
                                if key not in cache:
                                    cache[key] = qpiece(p, v, lam, Ip, I, variant, origin)
                                out.append(cache[key])
    return out


def _directional_batch(p, v, strata, origin, max_enum, cache, variant="Q") -> PieceBatch:
    try:
        jfam = jfamily(p, v, max_enum)
    except InfeasibleXi:
        return PieceBatch([], empty_reason="second-order region empty")
    verdict = two_licq(p, v, jfam)
    pieces = _pieces_from_strata(p, v, strata, jfam, variant, origin, cache)
    return PieceBatch(
        normalize_pieces(pieces, prune=False),
        unique=strata.all_unique,
        truncated=strata.truncated or jfam.truncated,
        two_licq=verdict,
    )


def dir_limiting(
    p: ProblemData,
    v: Sequence,
    vstar: Sequence,
    hyp: Optional[Hypotheses] = None,
    max_enum: int = 6561,
) -> ConeUnion:
    """Directional limiting normal cone at the reference pair in direction ``(v, v*)``, ``v != 0``."""
    hyp = hyp or hypotheses(p)
    v, vstar = vec(v), vec(vstar)
    if not any(v):
        raise ValueError("direction v must be nonzero; use n1_zero/n2_zero for v = 0")
    log = hyp.log()
    if not in_kbar(p, v) or not tangent_piece(p, v).member(vstar):
        comp = EXACT if hyp.vicinity else UNKNOWN_C
        return ConeUnion([], comp, "" if hyp.vicinity else "tangent cone only estimated from inside", log)
    strata = mbar(p, v, vstar, max_enum=max_enum)
    batch = _directional_batch(p, v, strata, "Directional", max_enum, {})
    if batch.two_licq is not None:
        log.append(batch.two_licq)
    return ConeUnion(normalize_pieces(batch.pieces), *_directional_completeness(hyp, [batch]), log=log)


def _directional_completeness(hyp: Hypotheses, batches: list, coverage: str = "") -> tuple[str, str]:
    if not hyp.vicinity:
        return UNKNOWN_C, "vicinity regularity not established"
    if any(b.truncated for b in batches):
        return UNKNOWN_C, "enumeration cap reached"
    bad = [b for b in batches if b.two_licq is not None and not b.two_licq.proven]
    if bad:
        return UNKNOWN_C, "2-regularity of maximal index sets not established"
    if any(not b.unique for b in batches):
        return UNKNOWN_C, "multiplier strata with non-unique lambda"
    if coverage:
        return UNKNOWN_C, coverage
    return EXACT, ""


def _check_zero_tangent(p: ProblemData, vstar: Sequence) -> bool:
    vstar = vec(vstar)
    return any(vstar) and geometry(p).kbar.polar().member(vstar)


def n1_zero(
    p: ProblemData,
    vstar: Optional[Sequence],
    probes: Sequence = (),
    hyp: Optional[Hypotheses] = None,
    max_enum: int = 6561,
) -> ConeUnion:
    """Limits along directions ``(0, v*)`` approached through nonzero ``v_k`` (``vstar=None`` unions over all ``v*``)."""
    hyp = hyp or hypotheses(p)
    log = hyp.log()
    if vstar is not None and not _check_zero_tangent(p, vstar):
        return ConeUnion([], EXACT if hyp.vicinity else UNKNOWN_C, "", log)
    kbar = geometry(p).kbar
    batches, coverage = _n1_batches(p, vstar, kbar, probes, max_enum, {})
    for b in batches:
        if b.two_licq is not None:
            log.append(b.two_licq)
    pieces = [pc for b in batches for pc in b.pieces]
    comp, why = _directional_completeness(hyp, batches, coverage)
    return ConeUnion(normalize_pieces(pieces), comp, why, log)


def _n1_batches(p, vstar, kbar, probes, max_enum, cache):
    batches = []
    coverage = ""
    for g in probe_groups(kbar, probes):
        keys = []
        for u in g.samples:
            strata = mbar(
                p, (ZERO,) * p.m, vstar, lam_region=lambda_bar(p, u), nonzero_vstar=vstar is None, max_enum=max_enum
            )
            b = _directional_batch(p, u, strata, "N1", max_enum, cache)
            batches.append(b)
            keys.append(frozenset(pc.setrep for pc in b.pieces))
        if len(set(keys)) > 1:
            coverage = "pieces vary inside a sampled face"
    return batches, coverage


def n2_zero(
    p: ProblemData,
    vstar: Optional[Sequence],
    probes: Sequence = (),
    hyp: Optional[Hypotheses] = None,
    max_enum: int = 6561,
) -> ConeUnion:
    """Outer estimate for limits along ``(0, v*)`` with ``v_k = 0``; always an upper estimate."""
    hyp = hyp or hypotheses(p)
    log = hyp.log()
    m = p.m
    if vstar is not None and not _check_zero_tangent(p, vstar):
        return ConeUnion([], UPPER, "", log)
    geo = geometry(p)
    if not hyp.subregular:
        return ConeUnion([], UNKNOWN_C, "metric subregularity not established", log)
    if geo.kbar.is_trivial():
        zero = (ZERO,) * m
        full = Cone.from_h(2 * m, eq=[zero + tuple(1 if j == i else 0 for j in range(m)) for i in range(m)])
        return ConeUnion([ConePiece(full, "N2")], UPPER, "", log)
    current = None
    reasons = []
    cache: dict = {}
    for g in probe_groups(geo.nullspace, (), include_zero=True):
        for u in g.samples:
            lt = lambda_tilde(p, u, probes)
            if not lt.exact:
                reasons.append(lt.reason)
            strata = mbar(p, (ZERO,) * m, vstar, lam_region=lt.poly, nonzero_vstar=vstar is None, max_enum=max_enum)
            try:
                jfam = jfamily(p, u, max_enum)
            except InfeasibleXi:
                current = []
                break
            if strata.truncated or jfam.truncated:
                reasons.append("enumeration cap reached")
            if not strata.all_unique:
                reasons.append("multiplier strata with non-unique lambda")
            pcs = normalize_pieces(_pieces_from_strata(p, u, strata, jfam, "Q0", "N2", cache))
            current = pcs if current is None else _intersect_unions(current, pcs)
    pieces = normalize_pieces(current or [])
    if reasons:
        return ConeUnion(pieces, UNKNOWN_C, "; ".join(sorted(set(reasons))), log)
    return ConeUnion(pieces, UPPER, "", log)


def _intersect_unions(a: list, b: list) -> list:
    out = []
    for x in a:
        for y in b:
            c = x.setrep.intersect(y.setrep)
            out.append(ConePiece(c, x.origin, x.v, x.lam, x.iplus, x.index))
    return normalize_pieces(out)


# ----------------------------------------------------------------------
# closed form under LICQ and the full limiting cone


def _iplus_lattice(base: frozenset, top: Sequence) -> list:
    out = []
    free = sorted(set(top) - base)
    for k in range(len(free) + 1):
        for extra in itertools.combinations(free, k):
            I = base | frozenset(extra)
            rest = sorted(I - base)
            for k2 in range(len(rest) + 1):
                for ex2 in itertools.combinations(rest, k2):
                    out.append((base | frozenset(ex2), I))
    return out


def limiting_licq(p: ProblemData) -> ConeUnion:
    """Closed-form limiting normal cone to the graph under LICQ."""
    licq, _ = classic_cq(p)
    if not licq:
        raise NotLicq("active gradients are linearly dependent")
    lam = _licq_multiplier(p)
    base = frozenset(i for i, t in enumerate(lam) if t != 0)
    pieces = []
    for Ip, I in _iplus_lattice(base, p.active):
        K = kcone(p, Ip, I)
        pieces.append(ConePiece(graph_piece(p, lam, K, K.polar()), "LICQ", lam=lam, iplus=Ip, index=I))
    return ConeUnion(normalize_pieces(pieces), EXACT)


@dataclass
class LimitingResult:
    lower: ConeUnion
    upper: ConeUnion
    parts: dict

    @property
    def exact(self) -> bool:
        return self.lower.completeness == EXACT


def full_limiting(p: ProblemData, probes: Sequence = (), max_enum: int = 6561) -> LimitingResult:
    """Two-sided estimate of the limiting normal cone to the graph; one exact union when they meet."""
    hyp = hypotheses(p)
    log = hyp.log()
    geo = geometry(p)
    kbar = geo.kbar
    cache: dict = {}
    lower: list = []
    upper: list = []
    upper_ok = hyp.vicinity
    reasons: list = []

    reg = regular_normal_graph(p, probes, hyp)
    upper += reg.pieces
    if reg.completeness == EXACT:
        lower += reg.pieces
    elif reg.completeness != UPPER:
        upper_ok = False
        reasons.append("regular normal cone: " + reg.reason)

    dir_batches = []
    if not kbar.is_trivial():
        for g in probe_groups(kbar, probes):
            keys = []
            for v in g.samples:
                strata = mbar(p, v, None, max_enum=max_enum)
                b = _directional_batch(p, v, strata, "Directional", max_enum, cache)
                dir_batches.append(b)
                keys.append(frozenset(pc.setrep for pc in b.pieces))
                if b.two_licq is not None:
                    log.append(b.two_licq)
                upper += b.pieces
                if hyp.vicinity and b.unique and not b.truncated and b.two_licq is not None and b.two_licq.proven:
                    lower += [pc for pc in b.pieces]
            if len(set(keys)) > 1:
                reasons.append("directional pieces vary inside a sampled face")
        comp, why = _directional_completeness(hyp, dir_batches)
        if comp != EXACT:
            upper_ok = False
            reasons.append(why)
        n1_batches, cov = _n1_batches(p, None, kbar, probes, max_enum, cache)
        if cov:
            reasons.append(cov)
        comp1, why1 = _directional_completeness(hyp, n1_batches)
        for b in n1_batches:
            upper += b.pieces
            if hyp.vicinity and b.unique and not b.truncated and b.two_licq is not None and b.two_licq.proven:
                lower += b.pieces
        if comp1 != EXACT:
            upper_ok = False
            reasons.append(why1)

    n2 = n2_zero(p, None, probes, hyp, max_enum)
    upper += n2.pieces
    if n2.completeness not in (UPPER, EXACT):
        upper_ok = False
        reasons.append("second-order limits: " + n2.reason)
    if hyp.licq:
        lam = _licq_multiplier(p)
        base = frozenset(i for i, t in enumerate(lam) if t != 0)
        for Ip, I in _iplus_lattice(base, p.active):
            if I != frozenset(p.active) or (Ip == base and not base):
                continue
            K = kcone(p, Ip, I)
            lower.append(ConePiece(graph_piece(p, lam, K, K.polar()), "N2", lam=lam, iplus=Ip, index=I))

    lower_p = normalize_pieces(lower)
    upper_p = normalize_pieces(upper)
    parts = {"regular": reg, "n2": n2}
    reason = "; ".join(sorted(set(r for r in reasons if r)))
    if upper_ok and not reason:
        if all(union_contains([pc.setrep for pc in lower_p], pc.setrep) for pc in upper_p):
            exact = ConeUnion(lower_p, EXACT, "", log)
            return LimitingResult(exact, exact, parts)
        return LimitingResult(
            ConeUnion(lower_p, LOWER, "", log),
            ConeUnion(normalize_pieces(lower_p + upper_p), UPPER, "", log),
            parts,
        )
    return LimitingResult(
        ConeUnion(lower_p, LOWER if lower_p else UNKNOWN_C, "" if lower_p else reason, log),
        ConeUnion(normalize_pieces(lower_p + upper_p), UNKNOWN_C, reason or "upper estimate not certified", log),
        parts,
    )
