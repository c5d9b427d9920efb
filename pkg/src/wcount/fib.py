"""Fibonacci numbers with a lazily grown, append-only memo table."""
from __future__ import annotations

import threading
from fractions import Fraction

from .quadratic import QuadraticValue

_table = [0, 1]
_lock = threading.Lock()


def fib(n: int) -> int:
    """Return f_n with f_0 = 0, f_1 = 1.

    Negative indices follow the usual extension f_{-n} = (-1)^{n+1} f_n,
    so f_{-1} = 1 and the recurrence holds for every integer n.
    """
    if n < 0:
        k = -n
        return fib(k) if k % 2 == 1 else -fib(k)
    if n >= len(_table):
        with _lock:
            while len(_table) <= n:
                _table.append(_table[-1] + _table[-2])
    return _table[n]


def lucas(n: int) -> int:
    """Lucas number L_n = f_{n-1} + f_{n+1}."""
    return fib(n - 1) + fib(n + 1)


def cassini_holds(n: int) -> bool:
    """Check f_n^2 = f_{n+1} f_{n-1} + (-1)^{n+1} for n >= 1."""
    return fib(n) ** 2 == fib(n + 1) * fib(n - 1) + (-1) ** (n + 1)


# Golden ratio as an exact element of Q(sqrt 5).
PHI = QuadraticValue(Fraction(1, 2), Fraction(1, 2), 5)
SQRT5 = QuadraticValue(0, 1, 5)


def phi_power(n: int) -> QuadraticValue:
    """phi^n = (L_n + f_n sqrt5) / 2, exact for n >= 0."""
    return QuadraticValue(Fraction(lucas(n), 2), Fraction(fib(n), 2), 5)


def binet(n: int) -> QuadraticValue:
    """(phi^n - (1 - phi)^n) / sqrt5 evaluated in Q(sqrt 5)."""
    conj = (1 - PHI) ** n
    return (phi_power(n) - conj) / SQRT5
