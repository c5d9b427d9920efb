"""Exact linear algebra over the rationals.

Two routes:

* ``bareiss_*`` -- fraction-free elimination on integer-scaled rows.  Exact,
  but intermediate entries grow with the dimension, so it is meant for small
  systems and as a cross-check.
* ``MonomialMatrix`` + ``modular_*`` -- elimination modulo word-size primes
  with numpy, followed by Chinese remaindering, rational reconstruction and an
  exact residual check.  A nonzero determinant modulo one prime certifies
  invertibility over Q; the exact residual check certifies the solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .base import InputError, WcountError


# --------------------------------------------------------------------------
# Bareiss
# --------------------------------------------------------------------------

def _scale_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in row])
    return out


def bareiss_det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant via fraction-free elimination."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    rows = [[Fraction(x) for x in r] for r in matrix]
    scale = Fraction(1)
    ints = []
    for r in rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        scale *= lcm
        ints.append([int(x * lcm) for x in r])
    a = ints
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1]) / scale


def bareiss_solve(matrix: Sequence[Sequence], rhs: Sequence) -> List[Fraction]:
    """Solve A x = b exactly; raises InputError when A is singular."""
    n = len(matrix)
    if len(rhs) != n or any(len(r) != n for r in matrix):
        raise InputError("dimension mismatch in bareiss_solve")
    a = _scale_rows([list(r) + [b] for r, b in zip(matrix, rhs)])
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                raise InputError("singular matrix")
            a[k], a[swap] = a[swap], a[k]
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(a[i][n])
        for j in range(i + 1, n):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x


# --------------------------------------------------------------------------
# primes and modular helpers
# --------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):  # deterministic below 3.4e14
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int = 2 ** 31) -> Iterator[int]:
    """Descending primes below ``bound`` (products of two fit in int64)."""
    n = bound - 1
    while n > 2:
        if _is_prime(n):
            yield n
        n -= 1


def frac_mod(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return x.numerator % p * pow(x.denominator % p, -1, p) % p


def rational_reconstruct(u: int, modulus: int) -> Fraction | None:
    """Find n/d = u (mod modulus) with |n|, d <= sqrt(modulus / 2)."""
    bound = math.isqrt(modulus // 2)
    r0, r1 = modulus, u % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def mod_solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Gauss-Jordan over GF(p); returns X with A X = B, or None if singular."""
    a = a.astype(np.int64) % p
    b = b.astype(np.int64) % p
    n = a.shape[0]
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return None
        r = c + int(nz[0])
        if r != c:
            a[[c, r]] = a[[r, c]]
            b[[c, r]] = b[[r, c]]
        inv = pow(int(a[c, c]), p - 2, p)
        a[c] = a[c] * inv % p
        b[c] = b[c] * inv % p
        f = a[:, c].copy()
        f[c] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            fc = f[nzr][:, None]
            a[nzr] = (a[nzr] - fc * a[c]) % p
            b[nzr] = (b[nzr] - fc * b[c]) % p
    return b


def mod_rank_full(a: np.ndarray, p: int) -> bool:
    return mod_solve(a, np.zeros((a.shape[0], 1), dtype=np.int64), p) is not None


# --------------------------------------------------------------------------
# monomial (generalized Vandermonde) matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialMatrix:
    """Square matrix with entry[row, col] = scale * prod_k points[row][k] ** exps[col][k].

    Kronecker products of univariate Vandermonde matrices are the special
    case of grid-shaped points; the interpolation systems use arbitrary points.
    """

    points: Tuple[Tuple[Fraction, ...], ...]
    exps: Tuple[Tuple[int, ...], ...]
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if len(self.points) != len(self.exps):
            raise InputError(
                f"monomial matrix must be square: {len(self.points)} rows, {len(self.exps)} cols")

    @property
    def n(self) -> int:
        return len(self.points)

    def entry(self, row: int, col: int) -> Fraction:
        v = self.scale
        for x, e in zip(self.points[row], self.exps[col]):
            if e:
                v = v * x ** e
        return v

    def dense(self) -> List[List[Fraction]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def row_apply(self, row: int, sparse: Dict[int, Fraction]) -> Fraction:
        """Exact (M x)[row] for a sparse vector given as {col: value}."""
        pt = self.points[row]
        total = Fraction(0)
        for col, val in sparse.items():
            t = Fraction(val)
            for x, e in zip(pt, self.exps[col]):
                if e:
                    t = t * x ** e
            total += t
        return total * self.scale

    def mod(self, p: int) -> np.ndarray:
        maxe = max((max(e) for e in self.exps), default=0)
        k = len(self.exps[0]) if self.exps else 0
        pts = np.array([[frac_mod(x, p) for x in pt] for pt in self.points], dtype=np.int64)
        powers = np.ones((self.n, k, maxe + 1), dtype=np.int64)
        for e in range(1, maxe + 1):
            powers[:, :, e] = powers[:, :, e - 1] * pts % p
        exps = np.array(self.exps, dtype=np.int64)
        out = np.full((self.n, self.n), frac_mod(self.scale, p), dtype=np.int64)
        for j in range(k):
            out = out * powers[:, j, :][:, exps[:, j]] % p
        return out

    def is_invertible(self, primes: int = 3) -> bool:
        """True if nonsingular modulo one of the first few primes (a certificate)."""
        for p, _ in zip(primes_below(), range(primes)):
            if mod_rank_full(self.mod(p), p):
                return True
        return False


class SolveFailure(WcountError):
    """No candidate passed the exact residual check (inconsistent right-hand side)."""


@dataclass
class ModularSolution:
    values: Dict[Tuple[int, int], Fraction]
    primes_used: int


def _crt_reconstruct(residues: List[np.ndarray], primes: List[int]) -> Dict[tuple, Fraction] | None:
    modulus = 1
    for p in primes:
        modulus *= p
    shape = residues[0].shape
    acc = np.zeros(shape, dtype=object)
    m_so_far = 1
    acc[...] = 0
    for res, p in zip(residues, primes):
        # Garner-style incremental CRT on object arrays
        inv = pow(m_so_far % p, -1, p)
        diff = (res.astype(object) - acc % p) % p
        acc = acc + m_so_far * ((diff * inv) % p)
        m_so_far *= p
    out = {}
    for idx in zip(*np.nonzero(acc)):
        u = int(acc[idx])
        q = rational_reconstruct(u, modulus)
        if q is None:
            return None
        out[tuple(int(i) for i in idx)] = q
    return out


def kron_solve(left: MonomialMatrix, right: MonomialMatrix,
               rhs: Sequence[Sequence[Fraction]],
               max_primes: int = 64) -> ModularSolution:
    """Solve (left ⊗ right) vec(S) = vec(C) with C given as a left.n x right.n array.

    Equivalent to left @ S @ right^T = C.  Per-axis solves modulo primes,
    then reconstruction; the candidate is accepted only after every equation
    of the full system is checked exactly.  ``right`` may be a 1x1 matrix,
    which reduces this to a plain solve.
    """
    n1, n2 = left.n, right.n
    if len(rhs) != n1 or any(len(r) != n2 for r in rhs):
        raise InputError(f"rhs must be {n1}x{n2}")
    residues, primes = [], []
    target = 1
    for p in primes_below():
        c_mod = np.array([[frac_mod(x, p) for x in row] for row in rhs], dtype=np.int64)
        x = mod_solve(left.mod(p), c_mod, p)
        if x is None:
            continue
        y = mod_solve(right.mod(p), x.T.copy(), p)
        if y is None:
            continue
        residues.append(y.T.copy())
        primes.append(p)
        if len(primes) < target:
            continue
        cand = _crt_reconstruct(residues, primes)
        if cand is not None and _kron_check(left, right, rhs, cand):
            return ModularSolution(cand, len(primes))
        if len(primes) >= max_primes:
            break
        target = 2 * len(primes)
    raise SolveFailure(f"no certified solution after {len(primes)} primes")


def _kron_check(left: MonomialMatrix, right: MonomialMatrix,
                rhs: Sequence[Sequence[Fraction]], cand: Dict[tuple, Fraction]) -> bool:
    by_right: Dict[int, Dict[int, Fraction]] = {}
    for (i, j), v in cand.items():
        by_right.setdefault(j, {})[i] = v
    for r1 in range(left.n):
        w = {j: left.row_apply(r1, col) for j, col in by_right.items()}
        w = {j: v for j, v in w.items() if v != 0}
        for r2 in range(right.n):
            if right.row_apply(r2, w) != rhs[r1][r2]:
                return False
    return True


def modular_solve(matrix: MonomialMatrix, rhs: Sequence[Fraction],
                  max_primes: int = 64) -> ModularSolution:
    """Certified exact solve of a single monomial system."""
    one = MonomialMatrix(((Fraction(1),),), ((0,),))
    sol = kron_solve(matrix, one, [[x] for x in rhs], max_primes)
    return ModularSolution({k: v for k, v in sol.values.items()}, sol.primes_used)
