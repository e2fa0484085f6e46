"""Multivariate polynomials with rational coefficients.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | "+" unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER | NAME | "(" expr ")"
    NUMBER := digits ("/" digits)?

A leading minus binds tighter than ``+``/``-`` but looser than ``^``, so
``-y1^2`` is ``-(y1^2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InputError, PolySyntaxError
from .exact import ZERO, rat


class Poly:
    """Immutable polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Fraction] = ()):
        self.vars = tuple(variables)
        clean = {}
        for e, c in dict(terms).items():
            c = rat(c)
            if len(e) != len(self.vars):
                raise ValueError("exponent length does not match variable count")
            if c:
                clean[tuple(e)] = c
        # graded lexicographic order, highest degree first
        self.terms = dict(sorted(clean.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0]))))

    @classmethod
    def const(cls, variables, c) -> "Poly":
        return cls(variables, {(0,) * len(variables): rat(c)})

    @classmethod
    def var(cls, variables, i: int) -> "Poly":
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, tuple(self.terms.items())))

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("polynomials over different variables")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, ZERO) + c
        return Poly(self.vars, t)

    def __neg__(self) -> "Poly":
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, ZERO) + c1 * c2
        return Poly(self.vars, t)

    def scale(self, c) -> "Poly":
        c = rat(c)
        return Poly(self.vars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def diff(self, i: int) -> "Poly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Poly(self.vars, t)

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != len(self.vars):
            raise ValueError(f"point has {len(point)} entries, polynomial has {len(self.vars)} variables")
        pt = [rat(v) for v in point]
        total = ZERO
        for e, c in self.terms.items():
            m = c
            for x, k in zip(pt, e):
                if k:
                    m *= x**k
            total += m
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            mag = abs(c)
            mag_s = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if mono:
                body = mono if mag == 1 else f"{mag_s}*{mono}"
            else:
                body = mag_s
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.render()!r})"


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.vars = tuple(variables)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg):
        raise PolySyntaxError(msg, self.peek()[2], self.text)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Poly:
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            return -self.unary()
        if t[0] == "op" and t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.peek()
            if t[0] != "num" or "/" in t[1]:
                self.fail("exponent must be a nonnegative integer")
            self.take()
            return base ** int(t[1])
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Poly.const(self.vars, Fraction(val))
        if kind == "name":
            self.take()
            if val not in self.vars:
                raise PolySyntaxError(f"unknown variable {val!r}", pos, self.text)
            return Poly.var(self.vars, self.vars.index(val))
        if kind == "op" and val == "(":
            self.take()
            p = self.expr()
            if not (self.peek()[0] == "op" and self.peek()[1] == ")"):
                self.fail("expected ')'")
            self.take()
            return p
        if kind == "end":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected {val!r}")


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse ``text`` into a polynomial over ``variables``."""
    if len(set(variables)) != len(variables):
        raise InputError("duplicate variable names")
    return _Parser(text, variables).parse()


def jet2(p: Poly, point: Sequence) -> tuple[Fraction, tuple, tuple]:
    """Value, gradient and Hessian of ``p`` at ``point``, all exact."""
    n = len(p.vars)
    if len(point) != n:
        raise ValueError(f"point has {len(point)} entries, polynomial has {n} variables")
    grads = [p.diff(i) for i in range(n)]
    value = p.evaluate(point)
    gradient = tuple(g.evaluate(point) for g in grads)
    hess = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            h = grads[i].diff(j).evaluate(point)
            hess[i][j] = h
            hess[j][i] = h
    return value, gradient, tuple(tuple(r) for r in hess)
