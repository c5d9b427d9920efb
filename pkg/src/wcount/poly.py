"""Sparse multivariate polynomials with rational coefficients.

Only what the Jacobian checks need: ring operations, partial derivatives,
evaluation and small determinants.  Monomials are exponent tuples of fixed
length ``nvars``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from numbers import Rational
from typing import Dict, Sequence, Tuple

Monomial = Tuple[int, ...]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction] | None = None):
        self.nvars = nvars
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def variables(cls, nvars: int) -> list["Poly"]:
        return [cls.var(nvars, i) for i in range(nvars)]

    def _lift(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials over different variable sets")
            return other
        if isinstance(other, (int, Rational)):
            return Poly.const(self.nvars, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.const(self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def diff(self, i: int) -> "Poly":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = out.get(tuple(mm), 0) + c * m[i]
        return Poly(self.nvars, out)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(point)}")
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * x ** e
            total = total + t
        return total

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for m in sorted(self.terms, reverse=True):
            mon = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(m) if e)
            parts.append(f"{self.terms[m]}" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)


def det(matrix: Sequence[Sequence]):
    """Determinant by the Leibniz formula; fine for the 4x4 Jacobians."""
    n = len(matrix)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = 1
        for row, col in enumerate(perm):
            term = matrix[row][col] * term
        total = total + term if inversions % 2 == 0 else total - term
    return total


def jacobian(polys: Sequence[Poly]) -> list[list[Poly]]:
    nvars = polys[0].nvars
    return [[p.diff(j) for j in range(nvars)] for p in polys]
