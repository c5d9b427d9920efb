"""Behaviors of probabilistic paths and their algebra.

The behavior of a path with edge probabilities ``rho`` is the quadruple
``pi[bb']`` where ``b = 1`` (resp. ``b' = 1``) attaches an extra edge of
probability one to the left (resp. right) end.  In matching mode that extra
edge forbids the adjacent path edge; in edge-cover mode it covers the end
vertex.

All routines here are generic over the scalar ring: they work for
``Fraction``, :class:`~wcount.quadratic.QuadraticValue` and
:class:`~wcount.poly.Poly` alike.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .base import CountingMode, DomainError, InputError
from .fib import fib
from .poly import Poly, det, jacobian

BITS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _checkable(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class Behavior:
    pi00: Any
    pi01: Any
    pi10: Any
    pi11: Any
    mode: CountingMode
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise InputError("behavior length must be positive")
        vals = self.as_tuple()
        if all(_checkable(v) for v in vals):
            if any(v < 0 or v > 1 for v in vals):
                raise InputError(f"behavior entries outside [0,1]: {vals}")
            lo, hi = (self.pi11, self.pi00) if self.mode is CountingMode.MATCHING \
                else (self.pi00, self.pi11)
            if not (lo <= self.pi01 <= hi and lo <= self.pi10 <= hi):
                raise InputError(f"behavior violates monotonicity ({self.mode.value}): {vals}")

    def __getitem__(self, bits):
        if isinstance(bits, str):
            bits = (int(bits[0]), int(bits[1]))
        b, bp = bits
        return (self.pi00, self.pi01, self.pi10, self.pi11)[2 * b + bp]

    def as_tuple(self) -> tuple:
        return (self.pi00, self.pi01, self.pi10, self.pi11)

    def map(self, fn) -> tuple:
        return tuple(fn(v) for v in self.as_tuple())


def _as_ring(x):
    return Fraction(x) if isinstance(x, int) else x


def _run(rho: Sequence, b: int, mode: CountingMode):
    """Two-state sweep from the left end; returns (state1, state0) at the right end.

    Matching: state1 = last edge taken, state0 = last edge absent.
    Edge cover: state1 = right vertex covered, state0 = not yet covered.
    """
    s1, s0 = b, 1 - b
    if mode is CountingMode.MATCHING:
        for p in rho:
            s1, s0 = p * s0, (1 - p) * (s1 + s0)
    else:
        for p in rho:
            s1, s0 = p * (s1 + s0), (1 - p) * s1
    return s1, s0


def behavior(rho: Sequence, mode: CountingMode = CountingMode.MATCHING) -> Behavior:
    """Behavior quadruple of the path with edge probabilities ``rho``."""
    if len(rho) == 0:
        raise InputError("behavior of an empty path is undefined")
    rho = [_as_ring(p) for p in rho]
    vals = {}
    for b in (0, 1):
        s1, s0 = _run(rho, b, mode)
        if mode is CountingMode.MATCHING:
            vals[(b, 0)], vals[(b, 1)] = s1 + s0, s0
        else:
            vals[(b, 0)], vals[(b, 1)] = s1, s1 + s0
    return Behavior(vals[(0, 0)], vals[(0, 1)], vals[(1, 0)], vals[(1, 1)],
                    mode, len(rho))


def concat(first: Behavior, second: Behavior) -> Behavior:
    """Behavior of the path obtained by gluing ``second`` after ``first``."""
    if first.mode is not second.mode:
        raise InputError("cannot concatenate behaviors of different modes")
    out = {}
    for b, bp in BITS:
        x0, x1 = first[(b, 0)], first[(b, 1)]
        y0, y1 = second[(0, bp)], second[(1, bp)]
        if first.mode is CountingMode.MATCHING:
            out[(b, bp)] = x0 * y1 + x1 * y0 - x1 * y1
        else:
            out[(b, bp)] = x0 * y1 + x1 * y0 - x0 * y0
    return Behavior(out[(0, 0)], out[(0, 1)], out[(1, 0)], out[(1, 1)],
                    first.mode, first.length + second.length)


def behavior_uniform_half(n: int, mode: CountingMode = CountingMode.MATCHING) -> Behavior:
    """Closed form of the all-1/2 path of length n via Fibonacci numbers."""
    if n < 1:
        raise InputError("path length must be positive")
    scale = Fraction(1, 2 ** n)
    if mode is CountingMode.MATCHING:
        vals = [fib(n + 2 - b - bp) * scale for b, bp in BITS]
    else:
        vals = [fib(n + b + bp) * scale for b, bp in BITS]
    return Behavior(*vals, mode, n)


def exclusive_usage(beh: Behavior) -> dict:
    """Probabilities that the path uses exactly the end vertices in (x, y).

    ``x`` = 1 iff the first path edge is present, ``y`` = 1 iff the last one
    is, jointly with the path's interior being valid for the mode.
    """
    p00, p01, p10, p11 = beh.as_tuple()
    if beh.mode is CountingMode.MATCHING:
        return {(0, 0): p11, (1, 0): p01 - p11, (0, 1): p10 - p11,
                (1, 1): p00 - p01 - p10 + p11}
    return {(1, 1): p00, (1, 0): p01 - p00, (0, 1): p10 - p00,
            (0, 0): p11 - p01 - p10 + p00}


def parity_determinant(rho: Sequence) -> Fraction:
    """pi01 * pi10 - pi00 * pi11 for the matching behavior of ``rho``."""
    beh = behavior(rho, CountingMode.MATCHING)
    return beh.pi01 * beh.pi10 - beh.pi00 * beh.pi11


def complement(values: Sequence) -> tuple:
    return tuple(1 - _as_ring(v) for v in values)


# --------------------------------------------------------------------------
# Jacobian determinants of the 4-path behavior map
# --------------------------------------------------------------------------

def behavior_polys(n: int = 4, mode: CountingMode = CountingMode.MATCHING,
                   tail: Sequence = ()) -> list[Poly]:
    """The four behavior polynomials of an n-edge symbolic path followed by
    the constant edges ``tail``, in bit order 00, 01, 10, 11."""
    xs = Poly.variables(n)
    beh = behavior(list(xs) + [Poly.const(n, t) for t in tail], mode)
    return list(beh.as_tuple())


def jacobian_det_xi_poly(mode: CountingMode = CountingMode.MATCHING) -> Poly:
    """det of d(pi_4^{bb'}) / d(chi) computed symbolically."""
    return det(jacobian(behavior_polys(4, mode)))


def jacobian_det_xi(chi: Sequence) -> Fraction:
    """Closed form of the 4-path Jacobian determinant (matching mode).

    With chi = (p, q, r, s) along the path, the determinant factors as
    ``p s (1-p)(1-q)(1-r)(1-s) (r s - p q + p q r - q r s)``; this is what the
    symbolic recomputation yields.  It vanishes at every symmetric point.
    """
    p, q, r, s = (_as_ring(x) for x in chi)
    return p * s * (1 - p) * (1 - q) * (1 - r) * (1 - s) * (r * s - p * q + p * q * r - q * r * s)


def jacobian_det_xi_published(chi: Sequence) -> Fraction:
    """The closed form as printed in the source publication.

    ``chi00 chi11 (chi00 + chi10 - chi00 chi10)(1-chi00)(1-chi01)^2(1-chi11)^3``.
    It does not agree with the symbolic determinant (see
    :func:`jacobian_det_xi`); kept for comparison and reporting only.
    """
    c00, c01, c10, c11 = (_as_ring(x) for x in chi)
    return c00 * c11 * (c00 + c10 - c00 * c10) * (1 - c00) * (1 - c01) ** 2 * (1 - c11) ** 3


def jacobian_det_xi_symbolic(chi: Sequence, mode: CountingMode = CountingMode.MATCHING) -> Fraction:
    return jacobian_det_xi_poly(mode)(tuple(_as_ring(x) for x in chi))


def upsilon(lam: Behavior, n_extra: int) -> tuple:
    """Behavior of ``lam``'s path extended by ``n_extra`` edges of probability 1/2.

    Uses the Fibonacci linear combination rather than path concatenation:
    matching:   2^-N (L[b0] f_{N+1-b'} + L[b1] f_{N-b'})
    edge cover: 2^-N (L[b0] f_{N-1+b'} + L[b1] f_{N+b'})
    """
    if n_extra < 0:
        raise DomainError("extension length must be nonnegative")
    if n_extra == 0:
        return lam.as_tuple()
    scale = Fraction(1, 2 ** n_extra)
    out = []
    for b, bp in BITS:
        l0, l1 = lam[(b, 0)], lam[(b, 1)]
        if lam.mode is CountingMode.MATCHING:
            v = l0 * fib(n_extra + 1 - bp) + l1 * fib(n_extra - bp)
        else:
            v = l0 * fib(n_extra - 1 + bp) + l1 * fib(n_extra + bp)
        out.append(v * scale)
    return tuple(out)


def jacobian_det_xiN(chi: Sequence, n_extra: int) -> Fraction:
    """2^{-4N} times the 4-path Jacobian determinant."""
    return jacobian_det_xi(chi) / 2 ** (4 * n_extra)


def jacobian_det_xiN_poly_via_fib(n_extra: int,
                                  mode: CountingMode = CountingMode.MATCHING) -> Poly:
    """det J_{xi_N} from the Fibonacci combination of the 4-path polynomials."""
    lam = behavior(Poly.variables(4), mode)
    return det(jacobian(list(upsilon(lam, n_extra))))


def jacobian_det_xiN_poly_direct(n_extra: int,
                                 mode: CountingMode = CountingMode.MATCHING) -> Poly:
    """det J_{xi_N} from the behavior polynomials of the extended path itself."""
    half = Fraction(1, 2)
    return det(jacobian(behavior_polys(4, mode, tail=[half] * n_extra)))
