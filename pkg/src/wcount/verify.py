"""Self-contained identity suites behind ``wcount verify``."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .base import CountingMode
from .emulation import build_gadget, check_fib_inequalities, closed_form_components, \
    prune_ranges, verify_system_B, verify_system_E
from .fib import cassini_holds
from .paths import behavior, behavior_uniform_half, concat, jacobian_det_xi, \
    jacobian_det_xi_poly, jacobian_det_xi_published, jacobian_det_xiN, \
    jacobian_det_xiN_poly_direct, jacobian_det_xiN_poly_via_fib, parity_determinant

M, EC = CountingMode.MATCHING, CountingMode.EDGE_COVER


@dataclass
class SuiteResult:
    name: str
    checks: List[Tuple[str, bool, str]] = field(default_factory=list)

    def add(self, label: str, ok: bool, note: str = ""):
        self.checks.append((label, bool(ok), note))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def _rand_frac(rng: random.Random, den: int = 97) -> Fraction:
    return Fraction(rng.randint(0, den), den)


def suite_cassini(opts) -> SuiteResult:
    r = SuiteResult("cassini")
    bad = [n for n in range(1, 1001) if not cassini_holds(n)]
    r.add("f_n^2 = f_{n+1} f_{n-1} + (-1)^{n+1}, n <= 1000", not bad, f"failures: {bad[:5]}")
    return r


def _closed_form_suite(name: str, mode: CountingMode) -> SuiteResult:
    r = SuiteResult(name)
    half = Fraction(1, 2)
    bad = [n for n in range(1, 61)
           if behavior([half] * n, mode).as_tuple() != behavior_uniform_half(n, mode).as_tuple()]
    r.add(f"all-1/2 closed form, n <= 60 ({mode.value})", not bad, f"failures: {bad[:5]}")
    return r


def suite_fiboexpr(opts) -> SuiteResult:
    return _closed_form_suite("fiboexpr", M)


def suite_fiboedgecovers(opts) -> SuiteResult:
    return _closed_form_suite("fiboedgecovers", EC)


def _concat_suite(name: str, mode: CountingMode, trials: int = 1000) -> SuiteResult:
    r = SuiteResult(name)
    rng = random.Random(7)
    bad = 0
    for _ in range(trials):
        a = [_rand_frac(rng) for _ in range(rng.randint(1, 6))]
        b = [_rand_frac(rng) for _ in range(rng.randint(1, 6))]
        if concat(behavior(a, mode), behavior(b, mode)).as_tuple() != behavior(a + b, mode).as_tuple():
            bad += 1
    r.add(f"{trials} random splits ({mode.value})", bad == 0, f"{bad} mismatches")
    return r


def suite_concat(opts) -> SuiteResult:
    return _concat_suite("concat", M)


def suite_concat2(opts) -> SuiteResult:
    return _concat_suite("concat2", EC)


def suite_jacobian(opts) -> SuiteResult:
    r = SuiteResult("jacobian")
    anchor = (Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1, 2))
    got = jacobian_det_xi(anchor)
    r.add("det J_xi(1/2, 0, 0, 1/2) = 1/128", got == Fraction(1, 128), f"got {got}")
    pub = jacobian_det_xi_published(anchor)
    r.add("published closed form at the anchor = 1/128", pub == Fraction(1, 128), f"got {pub}")
    poly = jacobian_det_xi_poly(M)
    rng = random.Random(11)
    pts = [tuple(_rand_frac(rng) for _ in range(4)) for _ in range(100)]
    bad = sum(poly(p) != jacobian_det_xi(p) for p in pts)
    r.add("closed form = symbolic determinant on 100 points", bad == 0, f"{bad} mismatches")
    bad_pub = sum(poly(p) != jacobian_det_xi_published(p) for p in pts)
    r.add("published closed form = symbolic determinant on 100 points", bad_pub == 0,
          f"{bad_pub} mismatches")
    ec = jacobian_det_xi_poly(EC)
    p = pts[0]
    r.add("edge-cover determinant nonzero at a random point", ec(p) != 0, f"value {ec(p)}")
    return r


def suite_jacobianN(opts) -> SuiteResult:
    r = SuiteResult("jacobianN")
    base = jacobian_det_xi_poly(M)
    for n in range(4):
        direct = jacobian_det_xiN_poly_direct(n)
        via = jacobian_det_xiN_poly_via_fib(n)
        scaled = base * Fraction(1, 2 ** (4 * n))
        r.add(f"det J_xi_N = 2^-4N det J_xi, N={n}", direct == scaled == via)
    return r


def suite_parity(opts) -> SuiteResult:
    r = SuiteResult("parity")
    rng = random.Random(13)
    bad = 0
    for _ in range(500):
        n = rng.randint(1, 8)
        rho = [Fraction(rng.randint(1, 96), 97) for _ in range(n)]
        d = parity_determinant(rho)
        if not ((d > 0) if n % 2 == 0 else (d < 0)):
            bad += 1
    r.add("sign(D) = (-1)^n on 500 random interior paths", bad == 0, f"{bad} violations")
    zeros = all(parity_determinant([Fraction(1, 3), z, Fraction(2, 5)]) == 0 for z in (0, 1))
    r.add("D = 0 when some probability is 0 or 1", zeros)
    return r


def suite_emulation(opts) -> SuiteResult:
    r = SuiteResult("emulation")
    max_i = getattr(opts, "max_i", 60) or 60
    for mode in (M, EC):
        bad = []
        for i in range(4, max_i + 1, 2):
            g = build_gadget(i, mode)
            if not (verify_system_B(g) and verify_system_E(g)
                    and all(0 < x < 1 for x in g.values)):
                bad.append(i)
        r.add(f"systems (B), (E) and (0,1) membership, even i <= {max_i} ({mode.value})",
              not bad, f"failures: {bad}")
    neg = [i for i in range(4, 47, 2) if closed_form_components(i)["Sigma"] < 0]
    r.add("Sigma >= 0 for even i in [4, 46]", not neg, f"negative at {neg}")
    g6 = build_gadget(6)
    r.add("p(6) != s(6)", g6.p != g6.s)
    pm, pe = build_gadget(8, M), build_gadget(8, EC)
    r.add("edge-cover gadget is the complement", all(1 - a == b for a, b in zip(pm.values, pe.values)))
    return r


def suite_inequalities(opts) -> SuiteResult:
    r = SuiteResult("inequalities")
    rep = check_fib_inequalities(200)
    for name, fails in rep.failures.items():
        r.add(name, not fails, f"failures: {fails[:5]}")
    r.add("forsigma holds from n = 48 on", rep.forsigma_threshold <= 48,
          f"least n: {rep.forsigma_threshold}")
    return r


def suite_algorithm1(opts) -> SuiteResult:
    r = SuiteResult("algorithm1")
    out = prune_ranges()
    half = Fraction(1, 2)
    r.add("exactly 6 surviving ranges", len(out) == 6, f"got {len(out)}")
    r.add("(0.5, 0.5, 0.5, 0.5) survives", (half,) * 4 in out)
    return r


SUITES: Dict[str, Callable] = {
    "cassini": suite_cassini,
    "fiboexpr": suite_fiboexpr,
    "fiboedgecovers": suite_fiboedgecovers,
    "concat": suite_concat,
    "concat2": suite_concat2,
    "jacobian": suite_jacobian,
    "jacobianN": suite_jacobianN,
    "parity": suite_parity,
    "emulation": suite_emulation,
    "inequalities": suite_inequalities,
    "algorithm1": suite_algorithm1,
}


def run_suites(names, opts=None) -> List[SuiteResult]:
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        from .base import InputError
        raise InputError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or all")
    return [SUITES[n](opts) for n in names]
