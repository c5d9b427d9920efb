"""Decimal-place budgets, perturbation bounds and truncation recovery.

Budgets are counted in decimal places throughout.  Oracle answers on graphs
whose probabilities are decimal fractions are themselves decimal fractions,
so rounding them to the right number of places recovers the exact value once
the approximation error is below half a unit in the last place.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .base import InputError


@dataclass(frozen=True)
class PrecisionBudget:
    m: int
    z: int
    N: int
    N_prime: int
    z_prime: int
    z_double_prime: int

    def __post_init__(self):
        if self.z_prime != self.m * (max(self.N, self.N_prime) + 10) * self.z:
            raise InputError("z' must equal m * (max(N, N') + 10) * z")
        if self.z_double_prime != self.z_prime + 2 * self.m + 1:
            raise InputError("z'' must equal z' + 2m + 1")

    @classmethod
    def for_instance(cls, m: int, z: int, N: int, N_prime: int = 0,
                     places_override: int | None = None) -> "PrecisionBudget":
        """Budget for an m-edge base graph with z-place probes.

        ``places_override`` replaces z' (and shifts z'' accordingly); the
        invariants are then not enforced, which is the point of the override.
        """
        if min(m, z, N, N_prime) < 0:
            raise InputError("budget parameters must be nonnegative")
        zp = m * (max(N, N_prime) + 10) * z
        if places_override is not None:
            b = object.__new__(cls)
            for k, v in dict(m=m, z=z, N=N, N_prime=N_prime, z_prime=places_override,
                             z_double_prime=places_override + 2 * m + 1).items():
                object.__setattr__(b, k, v)
            return b
        return cls(m, z, N, N_prime, zp, zp + 2 * m + 1)


def decimal_places_bound(m: int, z: int) -> int:
    """Decimal places of Pr on an m-edge graph with z-place probabilities, at most."""
    if m < 0 or z < 0:
        raise InputError("m and z must be nonnegative")
    return m * z


def decimal_places(x: Fraction) -> int | None:
    """Number of decimal places of x, or None if x is not a decimal fraction."""
    x = Fraction(x)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    return max(twos, fives) if d == 1 else None


def perturbation_bound(m: int, max_delta) -> Fraction:
    """2^{2m} * max_delta: bound on |Pr(pi) - Pr(pi_hat)| over an m-edge graph."""
    max_delta = Fraction(max_delta)
    if max_delta < 0:
        raise InputError("max_delta must be nonnegative")
    if m < 0:
        raise InputError("m must be nonnegative")
    return 2 ** (2 * m) * max_delta


def telescoping_bound(perturbed_edges: int, max_delta) -> Fraction:
    """Sum of per-edge deltas: Pr is multilinear with partial derivatives in [-1, 1]."""
    max_delta = Fraction(max_delta)
    if max_delta < 0 or perturbed_edges < 0:
        raise InputError("arguments must be nonnegative")
    return perturbed_edges * max_delta


def truncate_to_places(x, places: int) -> Fraction:
    """Round x to the nearest multiple of 10^-places; ties go away from zero."""
    if places < 0:
        raise InputError("places must be nonnegative")
    x = Fraction(x)
    scale = 10 ** places
    y = abs(x) * scale
    n = math.floor(y + Fraction(1, 2))
    return Fraction(n if x >= 0 else -n, scale)


def recovery_margin(places: int) -> Fraction:
    """Errors strictly below this are undone by truncate_to_places."""
    return Fraction(1, 2 * 10 ** places)
