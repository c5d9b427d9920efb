"""The four-edge gadget that emulates an even all-1/2 path.

For an even length ``i >= 4`` the probabilities (p, q, r, s) live in the
quadratic field Q(sqrt Sigma(i)).  Everything here is exact; approximation to
decimal fractions happens only in :func:`approximate_gadget`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

from .base import CountingMode, DomainError, InputError
from .fib import PHI, SQRT5, binet, fib, phi_power
from .paths import behavior, behavior_uniform_half
from .quadratic import QuadraticValue


@dataclass(frozen=True)
class EmulationGadget:
    i: int
    mode: CountingMode
    p: QuadraticValue
    q: QuadraticValue
    r: QuadraticValue
    s: QuadraticValue
    T: Fraction
    F_1: int  # f_{i-1}
    F_2: int  # f_{i-2}
    P: Fraction
    Q: Fraction
    A: Fraction
    Xi: Fraction
    Theta: Fraction
    C0: Fraction
    C1: Fraction
    C2: Fraction
    Sigma: Fraction

    @property
    def values(self) -> Tuple[QuadraticValue, ...]:
        return (self.p, self.q, self.r, self.s)


def closed_form_components(i: int) -> Dict[str, Fraction]:
    """The rational building blocks, transcribed without simplification."""
    T = Fraction(1, 2 ** i)
    a, b = fib(i - 1), fib(i - 2)
    P = 2 * a * b ** 2 + 2 * (a ** 2 - 1) * b
    Q = 2 * a ** 2 * b - 2 * (a ** 4 + a ** 3 * b) * T
    A = 2 * a * b ** 2
    Xi = a ** 2 * b - (a ** 4 + 2 * a ** 3 * b + a ** 2 * b ** 2) * T
    Theta = a ** 2 * T - b
    C0 = (a ** 4 - 2 * a ** 2 + 1) * b ** 2
    C1 = 2 * ((a ** 4 + a ** 2) * b ** 3 + 2 * (a ** 5 - a ** 3) * b ** 2
              + (a ** 6 - 2 * a ** 4 + a ** 2) * b)
    C2 = (a ** 8 + 4 * a ** 5 * b ** 3 + a ** 4 * b ** 4 - 2 * a ** 6 + a ** 4
          + 2 * (3 * a ** 6 - a ** 4) * b ** 2 + 4 * (a ** 7 - a ** 5) * b)
    Sigma = C0 - C1 * T + C2 * T ** 2
    return dict(T=T, F_1=a, F_2=b, P=Fraction(P), Q=Q, A=Fraction(A), Xi=Xi,
                Theta=Theta, C0=Fraction(C0), C1=Fraction(C1), C2=Fraction(C2),
                Sigma=Sigma)


def _check_length(i: int):
    if not isinstance(i, int) or i < 4 or i % 2:
        raise DomainError(f"emulation length must be an even integer >= 4, got {i!r}")


def build_gadget(i: int, mode: CountingMode = CountingMode.MATCHING) -> EmulationGadget:
    """Exact gadget for length ``i``; edge-cover mode takes entrywise complements.

    Raises AssertionError if any structural invariant fails; that would be a
    transcription bug, not a user error.
    """
    _check_length(i)
    c = closed_form_components(i)
    assert c["Sigma"] >= 0, f"Sigma({i}) < 0"
    assert c["P"] != 0 and c["Q"] != 0
    assert c["P"] == 2 * fib(i - 2) ** 2 * fib(i + 1), "P disagrees with its simplified form"
    root = QuadraticValue.sqrt_of(c["Sigma"])
    num_ps = c["A"] + c["Xi"] + c["Theta"]
    num_qr = c["Xi"] - c["Theta"]
    p = (root + num_ps) / c["P"]
    q = (root + num_qr) / c["Q"]
    r = (-root + num_qr) / c["Q"]
    s = (-root + num_ps) / c["P"]
    if mode is CountingMode.EDGE_COVER:
        p, q, r, s = 1 - p, 1 - q, 1 - r, 1 - s
    g = EmulationGadget(i=i, mode=mode, p=p, q=q, r=r, s=s, **c)
    assert all(0 < x < 1 for x in g.values), f"gadget({i}) leaves (0,1)"
    assert verify_system_E(g), f"system (E) fails at i={i}"
    return g


def _matching_values(g: EmulationGadget):
    if g.mode is CountingMode.MATCHING:
        return g.values
    return tuple(1 - x for x in g.values)


def verify_system_E(g: EmulationGadget) -> bool:
    """The four reduced equations, checked in the quadratic field."""
    p, q, r, s = _matching_values(g)
    i, a, b = g.i, g.F_1, g.F_2
    T = Fraction(1, 2 ** i)
    return (p * (1 - q) * (1 - s) == a * T
            and s * (1 - r) * (1 - p) == a * T
            and q * r == Fraction(1, a * a)
            and (1 - p) * (1 - s) == Fraction(a * a, 2 ** i * b))


def verify_system_B(g: EmulationGadget) -> bool:
    """The 4-path at the gadget values has the all-1/2 behavior of length i."""
    got = behavior(list(g.values), g.mode)
    want = behavior_uniform_half(g.i, g.mode)
    return got.as_tuple() == want.as_tuple()


def perturbed(g: EmulationGadget, delta: Fraction) -> EmulationGadget:
    """Copy of ``g`` with p shifted by ``delta`` (for negative tests)."""
    from dataclasses import replace
    return replace(g, p=g.p + delta)


# --------------------------------------------------------------------------
# decimal approximation
# --------------------------------------------------------------------------

def decimal_places_for_bits(z: int) -> int:
    """Smallest k with 10^-k <= 2^-z."""
    k = 0
    while 10 ** k < 2 ** z:
        k += 1
    return k


def approximate_value(x: QuadraticValue, places: int) -> Fraction:
    """Decimal fraction with ``places`` digits within 10^-places of x, clamped to [0,1].

    The floor of x * 10^places is found exactly: an integer square root gives
    the radical to within one unit of the scaled denominator, and exact sign
    tests fix the last digit.
    """
    if places < 0:
        raise InputError("places must be nonnegative")
    v = x.decimal_floor(places)
    return min(max(v, Fraction(0)), Fraction(1))


def approximate_gadget(g: EmulationGadget, z: int) -> Tuple[Fraction, ...]:
    """Four decimal fractions within 2^-z of the exact gadget values."""
    if z < 1:
        raise InputError("z must be >= 1")
    k = decimal_places_for_bits(z)
    return tuple(approximate_value(x, k) for x in g.values)


def approximate_gadget_places(g: EmulationGadget, places: int) -> Tuple[Fraction, ...]:
    """Four decimal fractions within 10^-places of the exact gadget values."""
    return tuple(approximate_value(x, places) for x in g.values)


# --------------------------------------------------------------------------
# Fibonacci inequalities and the sign-pruning script
# --------------------------------------------------------------------------

@dataclass
class InequalityReport:
    n_max: int
    failures: Dict[str, List[int]]
    forsigma_threshold: int
    phi_thresholds: Dict[str, int]
    sigma_nonnegative_upto: int

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())


# alpha constants for which 2^n >= alpha * phi^n is invoked, as elements of Q(sqrt5)
PHI_ALPHAS = {
    "2nf2-f0f0": PHI ** 2 * 9 / (2 * SQRT5),
    "2nf2f0-f1f1f_1": PHI * 27 / (2 * SQRT5),
    "forsigma": PHI ** 8 * 1215 / SQRT5,
}

PUBLISHED_PHI_THRESHOLDS = {"2nf2-f0f0": 8, "2nf2f0-f1f1f_1": 11, "forsigma": 48}


def lemma_2nf2_f0f0(n: int) -> bool:
    return 2 ** n * fib(n - 2) >= fib(n) ** 2


def lemma_2nf2f0_f1f1f_1(n: int) -> bool:
    return 2 ** n * fib(n - 2) * fib(n) >= fib(n - 1) ** 2 * fib(n + 1)


def lemma_forsigma(n: int) -> bool:
    return 2 ** n * fib(n - 2) ** 4 >= 10 * fib(n) ** 5


def fiboeps_holds(n: int) -> bool:
    """phi^n / (2 sqrt5) <= f_n <= 3 phi^n / (2 sqrt5), decided in Q(sqrt5)."""
    x = phi_power(n) / SQRT5
    return x / 2 <= fib(n) <= x * 3 / 2


def two_vs_phi_threshold(alpha: QuadraticValue, n_max: int) -> int:
    """Least n such that 2^k >= alpha * phi^k for every k in [n, n_max]."""
    threshold = n_max + 1
    for n in range(n_max, -1, -1):
        if 2 ** n >= alpha * phi_power(n):
            threshold = n
        else:
            break
    return threshold


def check_fib_inequalities(n_max: int = 200, sigma_upto: int = 47) -> InequalityReport:
    """Exact integer/quadratic-field checks of the Fibonacci inequality lemmas."""
    if n_max < 48:
        raise InputError("n_max must be at least 48")
    failures: Dict[str, List[int]] = {
        "2nf2-f0f0": [n for n in range(4, n_max + 1) if not lemma_2nf2_f0f0(n)],
        "2nf2f0-f1f1f_1": [n for n in range(4, n_max + 1) if not lemma_2nf2f0_f1f1f_1(n)],
        "forsigma": [n for n in range(48, n_max + 1) if not lemma_forsigma(n)],
        "fiboeps": [n for n in range(2, n_max + 1) if not fiboeps_holds(n)],
        "binet": [n for n in range(0, n_max + 1) if binet(n) != fib(n)],
        "cassini": [n for n in range(1, n_max + 1)
                    if fib(n) ** 2 != fib(n + 1) * fib(n - 1) + (-1) ** (n + 1)],
        "sigma": [i for i in range(4, sigma_upto + 1, 2)
                  if closed_form_components(i)["Sigma"] < 0],
    }
    threshold = n_max + 1
    for n in range(n_max, 3, -1):
        if lemma_forsigma(n):
            threshold = n
        else:
            break
    phi_thr = {name: two_vs_phi_threshold(alpha, n_max) for name, alpha in PHI_ALPHAS.items()}
    for name, n0 in phi_thr.items():
        if n0 > PUBLISHED_PHI_THRESHOLDS[name]:
            failures.setdefault("2-vs-phi", []).append(n0)
    return InequalityReport(n_max, failures, threshold, phi_thr, sigma_upto)


RANGE_REPRESENTATIVES = (Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2))


def prune_ranges() -> List[Tuple[Fraction, ...]]:
    """Sign-consistent range representatives for the reduced system, in scan order."""
    survivors = []
    for p, q, r, s in product(RANGE_REPRESENTATIVES, repeat=4):
        if p * (1 - q) * (1 - s) < 0:
            continue
        if s * (1 - r) * (1 - p) < 0:
            continue
        if q * r < 0:
            continue
        if (1 - p) * (1 - s) < 0:
            continue
        survivors.append((p, q, r, s))
    return survivors
