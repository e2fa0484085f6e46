"""Exact rational scalars, vectors and matrices.

Vectors are tuples of :class:`fractions.Fraction`, matrices are tuples of
row tuples.  Everything here is pure and floating point never appears.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Rat = Fraction
Vec = tuple  # tuple[Fraction, ...]
Mat = tuple  # tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce ints, Fractions and literal strings ("-3/2", "7") to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rat(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    num, slash, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if slash else 1
    except ValueError:
        raise ValueError(f"malformed rational literal {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rat(x: Fraction) -> str:
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_vec(xs: Iterable) -> str:
    return "(" + ", ".join(format_rat(x) for x in xs) + ")"


def vec(xs: Iterable) -> Vec:
    return tuple(rat(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def zero_mat(rows: int, cols: int) -> Mat:
    return tuple(zeros(cols) for _ in range(rows))


def identity(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(a: Sequence, b: Sequence) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Sequence, b: Sequence) -> Vec:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vec:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vec:
    c = rat(c)
    return tuple(c * x for x in a)


def neg(a: Sequence) -> Vec:
    return tuple(-x for x in a)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def matvec(M: Sequence[Sequence], x: Sequence) -> Vec:
    return tuple(dot(row, x) for row in M)


def vecmat(x: Sequence, M: Sequence[Sequence], cols: Optional[int] = None) -> Vec:
    """Row vector times matrix, i.e. ``M^T x``."""
    if len(x) != len(M):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(M)} rows")
    n = cols if cols is not None else (len(M[0]) if M else 0)
    out = [ZERO] * n
    for xi, row in zip(x, M):
        if xi:
            for j, mij in enumerate(row):
                out[j] += xi * mij
    return tuple(out)


def transpose(M: Sequence[Sequence], cols: Optional[int] = None) -> Mat:
    n = cols if cols is not None else (len(M[0]) if M else 0)
    return tuple(tuple(M[i][j] for i in range(len(M))) for j in range(n))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], inner: Optional[int] = None) -> Mat:
    if not A:
        return ()
    Bt = transpose(B, None if B else 0)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def mat_add(A: Sequence[Sequence], B: Sequence[Sequence]) -> Mat:
    return tuple(add(a, b) for a, b in zip(A, B))


def mat_scale(c, A: Sequence[Sequence]) -> Mat:
    return tuple(scale(c, a) for a in A)


def rref(M: Sequence[Sequence], cols: Optional[int] = None) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form by exact Gauss-Jordan elimination.

    Pivoting picks the first nonzero entry in each column.  Zero rows are
    dropped from the result.
    """
    n = cols if cols is not None else (len(M[0]) if M else 0)
    rows = [list(map(rat, r)) for r in M]
    for r in rows:
        if len(r) != n:
            raise ValueError("ragged matrix")
    pivots = []
    top = 0
    for j in range(n):
        if top == len(rows):
            break
        p = next((i for i in range(top, len(rows)) if rows[i][j] != 0), None)
        if p is None:
            continue
        rows[top], rows[p] = rows[p], rows[top]
        pv = rows[top][j]
        if pv != 1:
            rows[top] = [x / pv for x in rows[top]]
        piv_row = rows[top]
        for i in range(len(rows)):
            if i != top and rows[i][j] != 0:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], piv_row)]
        pivots.append(j)
        top += 1
    return tuple(tuple(r) for r in rows[:top]), tuple(pivots)


def rank(M: Sequence[Sequence], cols: Optional[int] = None) -> int:
    return len(rref(M, cols)[1])


def rank_kernel(M: Sequence[Sequence], cols: Optional[int] = None) -> tuple[int, list[Vec]]:
    """Rank of ``M`` and a basis of ``{x | M x = 0}``.

    ``cols`` must be given when ``M`` has no rows.
    """
    n = cols if cols is not None else (len(M[0]) if M else 0)
    R, piv = rref(M, n)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for r, pj in zip(R, piv):
            x[pj] = -r[f]
        basis.append(tuple(x))
    return len(piv), basis


def kernel(M: Sequence[Sequence], cols: Optional[int] = None) -> list[Vec]:
    return rank_kernel(M, cols)[1]


def solve_linear(M: Sequence[Sequence], b: Sequence, cols: Optional[int] = None) -> Optional[Vec]:
    """Some ``x`` with ``M x = b`` exactly, or ``None`` when ``b`` is not in the range."""
    n = cols if cols is not None else (len(M[0]) if M else 0)
    if len(b) != len(M):
        raise ValueError(f"right-hand side has {len(b)} entries, matrix has {len(M)} rows")
    aug = [tuple(map(rat, row)) + (rat(bi),) for row, bi in zip(M, b)]
    R, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for r, pj in zip(R, piv):
        x[pj] = r[n]
    return tuple(x)


def row_space_basis(M: Sequence[Sequence], cols: Optional[int] = None) -> list[Vec]:
    return list(rref(M, cols)[0])


def in_span(x: Sequence, basis: Sequence[Sequence]) -> bool:
    if not basis:
        return is_zero(x)
    return solve_linear(transpose(basis, len(basis[0])), x, len(basis)) is not None


def project_out(x: Sequence, basis: Sequence[Sequence]) -> Vec:
    """Orthogonal projection of ``x`` onto the complement of ``span(basis)``."""
    x = tuple(map(rat, x))
    if not basis:
        return x
    B = [tuple(map(rat, b)) for b in basis]
    gram = [[dot(a, b) for b in B] for a in B]
    coef = solve_linear(gram, [dot(b, x) for b in B], len(B))
    for c, b in zip(coef, B):
        if c:
            x = sub(x, scale(c, b))
    return x


def primitive(x: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the coprime integer vector on the same ray."""
    xs = [rat(v) for v in x]
    den = 1
    for v in xs:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in xs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def int_gcd_normalize(x: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in x:
        g = gcd(g, v)
    if g <= 1:
        return tuple(x)
    return tuple(v // g for v in x)


def canonical_basis(vectors: Sequence[Sequence], dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical integer basis of a linear span (primitive RREF rows)."""
    R, _ = rref(vectors, dim) if vectors else ((), ())
    return tuple(primitive(r) for r in R)


def norm1(x: Sequence) -> Fraction:
    return sum((abs(rat(v)) for v in x), ZERO)
