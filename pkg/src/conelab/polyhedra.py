"""Exact polyhedral cones and polyhedra.

A :class:`Cone` always carries both descriptions in canonical integer form,
so two cones describe the same set exactly when they compare equal.

* generator side: ``lines`` is the primitive RREF basis of the lineality
  space, ``rays`` are the extreme rays of the pointed section orthogonal to
  it, primitive and sorted;
* halfspace side: ``eq`` is the primitive RREF basis of the orthogonal
  complement of the span, ``ineq`` are the facet normals projected into the
  span, primitive and sorted.

Conversion uses the double description method on integer vectors with the
combinatorial adjacency test.
"""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import (
    ZERO,
    canonical_basis,
    dot,
    int_gcd_normalize,
    kernel,
    primitive,
    project_out,
    rank,
    rat,
    solve_linear,
    unit,
)

IntVec = tuple  # tuple[int, ...]


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _independent_rows(rows: Sequence[Sequence[int]], p: int) -> list[int]:
    chosen: list[int] = []
    basis: list = []
    for i, r in enumerate(rows):
        if rank(basis + [r], p) > len(basis):
            basis.append(r)
            chosen.append(i)
            if len(chosen) == p:
                break
    return chosen


def _dd_pointed(rows: Sequence[IntVec], p: int) -> list[IntVec]:
    """Extreme rays of the pointed cone ``{z in R^p | row . z <= 0}``.

    ``rows`` must have full column rank ``p``.
    """
    start = _independent_rows(rows, p)
    if len(start) != p:
        raise ValueError("constraint rows do not have full column rank")
    M0 = [rows[i] for i in start]
    rays: list[IntVec] = []
    tight: list[frozenset] = []
    for j in range(p):
        # column j of -M0^{-1}: M0 x = -e_j
        x = solve_linear(M0, [-1 if k == j else 0 for k in range(p)], p)
        rays.append(primitive(x))
        tight.append(frozenset(start[k] for k in range(p) if k != j))
    done = set(start)
    for idx, a in enumerate(rows):
        if idx in done:
            continue
        done.add(idx)
        vals = [_idot(a, r) for r in rays]
        plus = [k for k, v in enumerate(vals) if v > 0]
        if not plus:
            tight = [t | {idx} if vals[k] == 0 else t for k, t in enumerate(tight)]
            continue
        minus = [k for k, v in enumerate(vals) if v < 0]
        new_rays: list[IntVec] = []
        new_tight: list[frozenset] = []
        for pi in plus:
            for ni in minus:
                common = tight[pi] & tight[ni]
                if len(common) < p - 2:
                    continue
                adjacent = True
                for k in range(len(rays)):
                    if k != pi and k != ni and common <= tight[k]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = tuple(vals[pi] * x - vals[ni] * y for x, y in zip(rays[ni], rays[pi]))
                new_rays.append(int_gcd_normalize(r))
                new_tight.append(common | {idx})
        keep = [k for k, v in enumerate(vals) if v <= 0]
        rays = [rays[k] for k in keep] + new_rays
        tight = [tight[k] | {idx} if vals[k] == 0 else tight[k] for k in keep] + new_tight
    return rays


def _canon_rays(rays: Iterable[Sequence], lines: Sequence[IntVec]) -> tuple[IntVec, ...]:
    out = set()
    for r in rays:
        pr = primitive(project_out(r, lines)) if lines else primitive(r)
        if any(pr):
            out.add(pr)
    return tuple(sorted(out))


def h_to_v(dim: int, eq: Sequence[Sequence], ineq: Sequence[Sequence]) -> tuple[tuple, tuple]:
    """Canonical (rays, lines) of ``{x | eq x = 0, ineq x <= 0}``."""
    if dim == 0:
        return (), ()
    B = kernel([tuple(map(rat, r)) for r in eq], dim) if eq else [unit(dim, i) for i in range(dim)]
    k = len(B)
    if k == 0:
        return (), ()
    Ap = [tuple(dot(a, b) for b in B) for a in ineq]
    Ap = [r for r in Ap if any(r)]
    Ly = kernel(Ap, k) if Ap else [unit(k, i) for i in range(k)]

    def to_x(coef: Sequence) -> tuple:
        x = [ZERO] * dim
        for c, b in zip(coef, B):
            if c:
                for i in range(dim):
                    x[i] += c * b[i]
        return tuple(x)

    lines = canonical_basis([to_x(l) for l in Ly], dim)
    C = kernel(Ly, k) if Ly else [unit(k, i) for i in range(k)]
    p = len(C)
    rays_x = []
    if p:
        M = []
        for r in Ap:
            row = primitive([dot(r, c) for c in C])
            if any(row):
                M.append(row)
        for z in _dd_pointed(M, p):
            y = [sum((zj * c[i] for zj, c in zip(z, C)), ZERO) for i in range(k)]
            rays_x.append(to_x(y))
    return _canon_rays(rays_x, lines), lines


class Cone:
    """Polyhedral cone ``{x | eq x = 0, ineq x <= 0} = cone(rays) + span(lines)``."""

    __slots__ = ("dim", "eq", "ineq", "rays", "lines")

    def __init__(self, dim, eq, ineq, rays, lines, _trusted=False):
        if not _trusted:
            raise TypeError("use Cone.from_h or Cone.from_v")
        self.dim = dim
        self.eq = eq
        self.ineq = ineq
        self.rays = rays
        self.lines = lines

    # construction -----------------------------------------------------

    @classmethod
    def from_h(cls, dim: int, eq: Iterable[Sequence] = (), ineq: Iterable[Sequence] = ()) -> "Cone":
        eq = [primitive(r) for r in eq]
        ineq = [primitive(r) for r in ineq]
        for r in eq + ineq:
            if len(r) != dim:
                raise ValueError(f"row of length {len(r)} in a cone of dimension {dim}")
        rays, lines = h_to_v(dim, eq, [r for r in ineq if any(r)])
        prays, plines = h_to_v(dim, lines, rays)
        return cls(dim, plines, prays, rays, lines, _trusted=True)

    @classmethod
    def from_v(cls, dim: int, rays: Iterable[Sequence] = (), lines: Iterable[Sequence] = ()) -> "Cone":
        rays = [primitive(r) for r in rays]
        lines = [primitive(r) for r in lines]
        for r in rays + lines:
            if len(r) != dim:
                raise ValueError(f"generator of length {len(r)} in a cone of dimension {dim}")
        prays, plines = h_to_v(dim, lines, [r for r in rays if any(r)])
        rays_c, lines_c = h_to_v(dim, plines, prays)
        return cls(dim, plines, prays, rays_c, lines_c, _trusted=True)

    @classmethod
    def zero(cls, dim: int) -> "Cone":
        eq = tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))
        return cls(dim, eq, (), (), (), _trusted=True)

    @classmethod
    def full(cls, dim: int) -> "Cone":
        lines = tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))
        return cls(dim, (), (), (), lines, _trusted=True)

    @classmethod
    def orthant(cls, dim: int, sign: int = 1) -> "Cone":
        return cls.from_v(dim, rays=[tuple(sign if i == j else 0 for j in range(dim)) for i in range(dim)])

    # identity ---------------------------------------------------------

    def _key(self):
        return (self.dim, self.eq, self.ineq, self.rays, self.lines)

    def __eq__(self, other):
        return isinstance(other, Cone) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < other._key()

    def __repr__(self):
        return f"Cone(dim={self.dim}, eq={list(self.eq)}, ineq={list(self.ineq)})"

    def equal(self, other: "Cone") -> bool:
        return self.contains(other) and other.contains(self)

    # queries ----------------------------------------------------------

    def member(self, x: Sequence) -> bool:
        if len(x) != self.dim:
            raise ValueError(f"point of length {len(x)} for a cone of dimension {self.dim}")
        xs = [rat(v) for v in x]
        return all(dot(r, xs) == 0 for r in self.eq) and all(dot(r, xs) <= 0 for r in self.ineq)

    def contains(self, other: "Cone") -> bool:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return all(self.member(r) for r in other.rays) and all(
            self.member(l) and self.member(tuple(-v for v in l)) for l in other.lines
        )

    def is_trivial(self) -> bool:
        return not self.rays and not self.lines

    def is_full(self) -> bool:
        return not self.eq and not self.ineq

    def span_dim(self) -> int:
        return self.dim - len(self.eq)

    def is_subspace(self) -> bool:
        return not self.rays

    def relint_point(self) -> tuple:
        """A point in the relative interior (sum of the extreme rays)."""
        x = [0] * self.dim
        for r in self.rays:
            for i, v in enumerate(r):
                x[i] += v
        return tuple(x)

    # operations -------------------------------------------------------

    def polar(self) -> "Cone":
        return Cone(self.dim, self.lines, self.rays, self.ineq, self.eq, _trusted=True)

    def intersect(self, other: "Cone") -> "Cone":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Cone.from_h(self.dim, self.eq + other.eq, self.ineq + other.ineq)

    def sum(self, other: "Cone") -> "Cone":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Cone.from_v(self.dim, self.rays + other.rays, self.lines + other.lines)

    def image(self, M: Sequence[Sequence]) -> "Cone":
        """``{M x | x in self}``; ``M`` has ``self.dim`` columns."""
        k = len(M)

        def ap(x):
            return tuple(dot(row, x) for row in M)

        return Cone.from_v(k, [ap(r) for r in self.rays], [ap(l) for l in self.lines])

    def preimage(self, M: Sequence[Sequence], n: int) -> "Cone":
        """``{x in R^n | M x in self}``; ``M`` has ``self.dim`` rows and ``n`` columns."""
        if len(M) != self.dim:
            raise ValueError("map rows must match the cone dimension")

        def pull(r):
            return tuple(sum((r[i] * rat(M[i][j]) for i in range(self.dim)), ZERO) for j in range(n))

        return Cone.from_h(n, [pull(r) for r in self.eq], [pull(r) for r in self.ineq])

    def project(self, keep: Sequence[int]) -> "Cone":
        keep = list(keep)

        def sel(x):
            return tuple(x[i] for i in keep)

        return Cone.from_v(len(keep), [sel(r) for r in self.rays], [sel(l) for l in self.lines])

    def embed(self, n: int, positions: Sequence[int]) -> "Cone":
        """The cylinder ``{x in R^n | x[positions] in self}``."""

        def lift(r):
            out = [0] * n
            for i, p in enumerate(positions):
                out[p] = r[i]
            return tuple(out)

        return Cone.from_h(n, [lift(r) for r in self.eq], [lift(r) for r in self.ineq])

    def faces_with_samples(self) -> list["FaceSample"]:
        return faces_with_samples(self)


class FaceSample:
    """A face of a sign-split piece of a cone with relative-interior samples."""

    __slots__ = ("face", "samples")

    def __init__(self, face: Cone, samples: list):
        self.face = face
        self.samples = samples

    @property
    def sample(self):
        return self.samples[0]

    def __repr__(self):
        return f"FaceSample(face={self.face!r}, samples={self.samples})"


def _weighted_samples(gens: Sequence[IntVec], dim: int) -> list[tuple]:
    if not gens:
        return [tuple([0] * dim)]
    weights = [[1] * len(gens)]
    if len(gens) >= 2:
        w = [1] * len(gens)
        w[0] = 2
        weights.append(w)
        w = [1] * len(gens)
        w[1] = 2
        weights.append(w)
    out = []
    for ws in weights:
        x = [0] * dim
        for c, g in zip(ws, gens):
            for i, v in enumerate(g):
                x[i] += c * v
        out.append(primitive(x))
    return out


def faces_with_samples(c: Cone) -> list[FaceSample]:
    """Faces of the pointed cones ``cone(rays + signed lineality basis)``.

    The lineality space is split into its sign orthants, so every nonzero
    direction of ``c`` lies in the relative interior of exactly one listed
    face.  Faces of dimension two or more carry three distinct samples.
    """
    seen: dict = {}
    out: list[FaceSample] = []
    n = len(c.lines)
    for signs in itertools.product((1, -1), repeat=n):
        gens = list(c.rays) + [tuple(s * v for v in l) for s, l in zip(signs, c.lines)]
        piece = Cone.from_v(c.dim, gens)
        g = list(piece.rays)
        rows = list(piece.ineq) + list(piece.eq) + [tuple(-v for v in r) for r in piece.eq]
        tights = [frozenset(i for i, a in enumerate(rows) if _idot(a, r) == 0) for r in g]
        allrows = frozenset(range(len(rows)))

        def closure(S: frozenset) -> frozenset:
            T = allrows
            for k in S:
                T = T & tights[k]
            return frozenset(k for k in range(len(g)) if T <= tights[k])

        faces = {closure(frozenset())}
        frontier = list(faces)
        while frontier:
            nxt = []
            for F in frontier:
                for k in range(len(g)):
                    if k not in F:
                        G = closure(F | {k})
                        if G not in faces:
                            faces.add(G)
                            nxt.append(G)
            frontier = nxt
        for F in sorted(faces, key=lambda s: (len(s), sorted(s))):
            fg = [g[k] for k in sorted(F)]
            face = Cone.from_v(c.dim, fg)
            if face in seen:
                continue
            seen[face] = True
            out.append(FaceSample(face, _weighted_samples(fg, c.dim)))
    return out


# ----------------------------------------------------------------------
# union containment


def strictly_feasible(dim: int, closed_eq, closed_ineq, strict: Sequence[Sequence]) -> bool:
    """Is ``{x | closed_eq x = 0, closed_ineq x <= 0, s x > 0 for s in strict}`` nonempty?"""
    from .simplex import max_slack

    if not strict:
        return True
    return max_slack(dim, closed_eq, closed_ineq, [tuple(-v for v in s) for s in strict]) is not None


def union_contains(cones: Sequence[Cone], target: Cone) -> bool:
    """Exactly decide ``target`` is a subset of the union of ``cones``."""
    if target.is_trivial():
        return bool(cones)
    for c in cones:
        if c.contains(target):
            return True
    dim = target.dim
    return _region_covered(dim, list(target.eq), list(target.ineq), [], list(cones))


def _region_covered(dim, ceq, cin, strict, cones) -> bool:
    if not strictly_feasible(dim, ceq, cin, strict):
        return True
    if not cones:
        return False
    B, rest = cones[0], cones[1:]
    halves = list(B.ineq) + list(B.eq) + [tuple(-v for v in r) for r in B.eq]
    prefix: list = []
    for a in halves:
        if not _region_covered(dim, ceq, cin + prefix, strict + [a], rest):
            return False
        prefix.append(a)
    return True


def unions_equal(a: Sequence[Cone], b: Sequence[Cone]) -> bool:
    return all(union_contains(b, x) for x in a) and all(union_contains(a, y) for y in b)


# ----------------------------------------------------------------------
# polyhedra


class Polyhedron:
    """``{x | A x = a, B x <= b}``, with a lazily computed generator form.

    The generator form comes from the homogenized cone
    ``{(x, t) | A x - a t = 0, B x - b t <= 0, t >= 0}``.
    """

    def __init__(self, dim: int, A=(), a=(), B=(), b=()):
        self.dim = dim
        self.A = tuple(tuple(map(rat, r)) for r in A)
        self.a = tuple(map(rat, a))
        self.B = tuple(tuple(map(rat, r)) for r in B)
        self.b = tuple(map(rat, b))
        if len(self.A) != len(self.a) or len(self.B) != len(self.b):
            raise ValueError("row and right-hand side counts differ")
        for r in self.A + self.B:
            if len(r) != dim:
                raise ValueError(f"row of length {len(r)} in dimension {dim}")
        self._lock = threading.Lock()
        self._hom: Optional[Cone] = None

    @classmethod
    def from_v(cls, dim: int, vertices=(), rays=(), lines=()) -> "Polyhedron":
        vertices = [tuple(map(rat, v)) for v in vertices]
        if not vertices:
            return cls.empty(dim)
        hom = Cone.from_v(
            dim + 1,
            [v + (Fraction(1),) for v in vertices] + [tuple(map(rat, r)) + (0,) for r in rays],
            [tuple(map(rat, l)) + (0,) for l in lines],
        )
        A, a, B, b = [], [], [], []
        for r in hom.eq:
            A.append(r[:dim])
            a.append(-r[dim])
        for r in hom.ineq:
            if any(r[:dim]):
                B.append(r[:dim])
                b.append(-r[dim])
        p = cls(dim, A, a, B, b)
        p._hom = hom
        return p

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls(dim, B=[[0] * dim], b=[-1])

    @classmethod
    def point(cls, x: Sequence) -> "Polyhedron":
        return cls.from_v(len(x), [x])

    @classmethod
    def from_cone(cls, c: Cone) -> "Polyhedron":
        return cls(c.dim, c.eq, [0] * len(c.eq), c.ineq, [0] * len(c.ineq))

    @property
    def homogenized(self) -> Cone:
        with self._lock:
            if self._hom is None:
                n = self.dim
                eq = [r + (-ai,) for r, ai in zip(self.A, self.a)]
                ineq = [r + (-bi,) for r, bi in zip(self.B, self.b)]
                ineq.append(tuple([0] * n + [-1]))
                self._hom = Cone.from_h(n + 1, eq, ineq)
            return self._hom

    @property
    def vertices(self) -> list[tuple]:
        """Points of the minimal faces (vertices when there is no lineality)."""
        return sorted(
            tuple(Fraction(v, r[-1]) for v in r[:-1]) for r in self.homogenized.rays if r[-1] > 0
        )

    @property
    def rays(self) -> list[tuple]:
        return [tuple(Fraction(v) for v in r[:-1]) for r in self.homogenized.rays if r[-1] == 0]

    @property
    def lines(self) -> list[tuple]:
        return [tuple(Fraction(v) for v in l[:-1]) for l in self.homogenized.lines]

    def is_empty(self) -> bool:
        return not any(r[-1] > 0 for r in self.homogenized.rays)

    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    def is_singleton(self) -> bool:
        return not self.is_empty() and self.is_bounded() and len(self.vertices) == 1

    def recession(self) -> Cone:
        return Cone.from_v(self.dim, self.rays, self.lines)

    def member(self, x: Sequence) -> bool:
        xs = [rat(v) for v in x]
        return all(dot(r, xs) == ai for r, ai in zip(self.A, self.a)) and all(
            dot(r, xs) <= bi for r, bi in zip(self.B, self.b)
        )

    def _canon(self):
        if self.is_empty():
            return ("empty", self.dim)
        return ("poly", self.homogenized)

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.dim == other.dim and self._canon() == other._canon()

    def __hash__(self):
        return hash(self._canon())

    def __repr__(self):
        if self.is_empty():
            return f"Polyhedron(empty, dim={self.dim})"
        return f"Polyhedron(vertices={self.vertices}, rays={self.rays}, lines={self.lines})"

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        return Polyhedron(self.dim, self.A + other.A, self.a + other.a, self.B + other.B, self.b + other.b)

    def with_rows(self, A=(), a=(), B=(), b=()) -> "Polyhedron":
        return Polyhedron(
            self.dim, self.A + tuple(A), self.a + tuple(a), self.B + tuple(B), self.b + tuple(b)
        )

    def image(self, M: Sequence[Sequence]) -> "Polyhedron":
        """Linear image ``{M x | x in self}``."""
        k = len(M)
        if self.is_empty():
            return Polyhedron.empty(k)

        def ap(x):
            return tuple(dot(row, x) for row in M)

        return Polyhedron.from_v(
            k, [ap(v) for v in self.vertices], [ap(r) for r in self.rays], [ap(l) for l in self.lines]
        )

    def plus_cone(self, c: Cone) -> "Polyhedron":
        if self.is_empty():
            return self
        return Polyhedron.from_v(
            self.dim, self.vertices, self.rays + list(c.rays), self.lines + list(c.lines)
        )
