"""Recovering matching / edge-cover counts from weighted-oracle answers.

Pipelines
---------
``sub6``       every base edge subdivided 6 times; one probe family.
``uniform:K``  every base edge subdivided K >= 7 times; the tail of K-6
               edges of probability 1/2 enters through the Fibonacci extension.
``general``    eta(e) >= 10 of mixed parity.  Even and odd edges get separate
               probe families; the emulation gadget pads every path to the
               longest path of its parity class, and the linear system becomes
               a Kronecker product of two per-class systems.

Each oracle answer satisfies

    Pr(instance) = 2^{-2m} sum_{tau} |S_tau| prod_{bb'} Upsilon_{kappa,bb'}^{tau_bb'}

where S_tau collects the selection functions of type tau and Upsilon is the
behavior of the path part between the two outer 1/2 edges.  Solving for
|S_tau| and summing the diagonal types gives the count.
"""
from __future__ import annotations

import os
import time
from functools import lru_cache
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .base import CapacityError, ConstructionError, CountingMode, InputError, ProbabilisticFailure
from .emulation import approximate_gadget_places, build_gadget
from .graph import Edge, Graph, SubdivisionMap, pr_subdivision, _usage_sum
from .linalg import MonomialMatrix, kron_solve
from .paths import Behavior, behavior, concat, exclusive_usage, upsilon
from .precision import PrecisionBudget, telescoping_bound, truncate_to_places, recovery_margin
from .quadratic import QuadraticValue

TypeVector = Tuple[int, int, int, int]
HALF = Fraction(1, 2)
SELECTION_EDGE_CAP = 10


# --------------------------------------------------------------------------
# type vectors and selection functions
# --------------------------------------------------------------------------

def type_index(tau: Sequence[int], m: int) -> int:
    """Base-(m+1) encoding with the 00 component most significant."""
    base = m + 1
    idx = 0
    for t in tau:
        if not 0 <= t <= m:
            raise InputError(f"type component {t} outside [0, {m}]")
        idx = idx * base + t
    return idx


def index_type(idx: int, m: int) -> TypeVector:
    base = m + 1
    out = []
    for _ in range(4):
        idx, r = divmod(idx, base)
        out.append(r)
    return tuple(reversed(out))


def all_types(m: int) -> List[TypeVector]:
    return [index_type(i, m) for i in range((m + 1) ** 4)]


def _vertex_options(H: Graph, v, mode: CountingMode):
    inc = H.incident(v)
    if mode is CountingMode.MATCHING:
        return [frozenset()] + [frozenset([e]) for e in inc]
    return [frozenset(c) for k in range(1, len(inc) + 1) for c in combinations(inc, k)]


def selection_functions(H: Graph, mode: CountingMode = CountingMode.MATCHING):
    """Yield every selection function as a dict vertex -> frozenset of edges."""
    options = [_vertex_options(H, v, mode) for v in H.vertices]
    for choice in product(*options):
        yield dict(zip(H.vertices, choice))


def edge_type(mu: Mapping, e: Edge, orientation: Mapping[Edge, Edge]) -> Tuple[int, int]:
    src, dst = orientation[e]
    return int(e in mu[src]), int(e in mu[dst])


def selection_type_counts(H: Graph, orientation: Mapping[Edge, Edge] | None = None,
                          parity: Mapping[Edge, int] | None = None,
                          mode: CountingMode = CountingMode.MATCHING) -> Dict[tuple, int]:
    """|S_tau| (or |S_{tau,tau'}| when ``parity`` splits edges into 0/1 classes)."""
    if H.m > SELECTION_EDGE_CAP:
        raise CapacityError(f"{H.m} edges exceeds the selection cap of {SELECTION_EDGE_CAP}")
    orient = {e: e for e in H.edges}
    orient.update(orientation or {})
    counts: Dict[tuple, int] = {}
    for mu in selection_functions(H, mode):
        tau = [[0] * 4, [0] * 4]
        for e in H.edges:
            b, bp = edge_type(mu, e, orient)
            cls = parity[e] if parity is not None else 0
            tau[cls][2 * b + bp] += 1
        key = (tuple(tau[0]), tuple(tau[1])) if parity is not None else tuple(tau[0])
        counts[key] = counts.get(key, 0) + 1
    return counts


def _off_diagonal_free(tau: Sequence[int]) -> bool:
    return tau[1] == 0 and tau[2] == 0


def count_from_types(counts: Mapping, mode: CountingMode = CountingMode.MATCHING) -> int:
    """Sum of |S_tau| over types with no 01/10 edges (in every class)."""
    total = 0
    for key, c in counts.items():
        taus = key if isinstance(key[0], tuple) else (key,)
        if all(_off_diagonal_free(t) for t in taus):
            total += c
    return total


# --------------------------------------------------------------------------
# pipelines and instances
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Pipeline:
    kind: str  # "sub6" | "uniform" | "general"
    K: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> "Pipeline":
        text = text.strip().lower()
        if text == "sub6":
            return cls("sub6", 6)
        if text.startswith("uniform:"):
            try:
                k = int(text.split(":", 1)[1])
            except ValueError:
                raise InputError(f"bad pipeline {text!r}") from None
            if k < 7:
                raise InputError("uniform pipeline needs K >= 7")
            return cls("uniform", k)
        if text == "general":
            return cls("general")
        raise InputError(f"unknown pipeline {text!r} (sub6 | uniform:<K> | general)")

    def __str__(self):
        return {"sub6": "sub6", "general": "general"}.get(self.kind, f"uniform:{self.K}")


@dataclass(frozen=True)
class ClassLayout:
    """One probe family: the edges it covers and its padded length K."""
    edges: Tuple[Edge, ...]
    K: Optional[int]

    @property
    def N(self) -> Optional[int]:
        return None if self.K is None else self.K - 6

    @property
    def trivial(self) -> bool:
        return not self.edges


@dataclass(frozen=True)
class Layout:
    pipeline: Pipeline
    classes: Tuple[ClassLayout, ...]  # one class, or (even, odd)
    mode: CountingMode

    @property
    def split(self) -> bool:
        return len(self.classes) == 2

    def class_of(self, e: Edge) -> int:
        for i, c in enumerate(self.classes):
            if e in c.edges:
                return i
        raise KeyError(e)


def plan_layout(sub: SubdivisionMap, pipeline: Pipeline,
                mode: CountingMode = CountingMode.MATCHING) -> Layout:
    """Check the eta preconditions and fix the probe-family layout."""
    H = sub.base
    if H.m == 0:
        raise ConstructionError("base graph has no edges")
    if pipeline.kind in ("sub6", "uniform"):
        bad = {e: k for e, k in sub.eta.items() if k != pipeline.K}
        if bad:
            e, k = next(iter(bad.items()))
            raise ConstructionError(
                f"pipeline {pipeline} needs eta = {pipeline.K} everywhere; edge {e!r} has {k}")
        return Layout(pipeline, (ClassLayout(H.edges, pipeline.K),), mode)
    short = {e: k for e, k in sub.eta.items() if k < 10}
    if short:
        e, k = next(iter(short.items()))
        raise ConstructionError(f"general pipeline needs eta >= 10; edge {e!r} has {k}")
    classes = []
    for parity in (0, 1):
        edges = tuple(e for e in H.edges if sub.eta[e] % 2 == parity)
        K = max((sub.eta[e] for e in edges), default=None)
        classes.append(ClassLayout(edges, K))
    return Layout(pipeline, tuple(classes), mode)


@dataclass(frozen=True)
class Instance:
    sub: SubdivisionMap
    per_path: Mapping[Edge, tuple]


@lru_cache(maxsize=64)
def _gadget_values(i: int, mode: CountingMode, policy: str, places: Optional[int]):
    g = build_gadget(i, mode)
    if policy == "exact":
        return g.values
    if places is None:
        raise InputError("approximate gadgets need a number of places")
    return approximate_gadget_places(g, places)


def build_instance(sub: SubdivisionMap, layout: Layout, probes: Sequence[tuple],
                   gadget: str = "ideal", places: Optional[int] = None) -> Instance:
    """Per-path probability lists for one probe choice (one tuple per class).

    ``gadget``: "ideal" replaces each gadget by the all-1/2 path it emulates
    (the graph is then sub(H, eta') with eta' = K per class); "exact" uses the
    quadratic-field gadget values; "approx" uses ``places``-digit decimals.
    """
    if gadget not in ("ideal", "exact", "approx"):
        raise InputError(f"unknown gadget policy {gadget!r}")
    if len(probes) != len(layout.classes):
        raise InputError("one probe tuple per class is required")
    per_path = {}
    eta = dict(sub.eta)
    for cls, rho in zip(layout.classes, probes):
        if cls.trivial:
            continue
        if len(rho) != 4:
            raise InputError("probe tuples have four entries")
        for e in cls.edges:
            gamma = sub.eta[e]
            if layout.pipeline.kind != "general":
                per_path[e] = (HALF, *rho) + (HALF,) * (gamma - 5)
                continue
            i = cls.N - gamma + 10
            if i < 4 or i % 2:
                raise ConstructionError(f"gadget length {i} on edge {e!r} is odd or below 4")
            if gadget == "ideal":
                per_path[e] = (HALF, *rho) + (HALF,) * (cls.K - 5)
                eta[e] = cls.K
            else:
                g = _gadget_values(i, layout.mode, gadget, places)
                per_path[e] = (HALF, *rho, *g) + (HALF,) * (gamma - 9)
    target = sub if eta == dict(sub.eta) else SubdivisionMap(sub.base, eta, sub.orientation)
    return Instance(target, per_path)


# --------------------------------------------------------------------------
# oracles
# --------------------------------------------------------------------------

def _rationalize(x):
    if isinstance(x, QuadraticValue):
        if not x.is_rational():
            raise ConstructionError(f"oracle answer is irrational: {x!r}")
        return Fraction(x.a)
    return Fraction(x)


class CollapseOracle:
    """Path-collapse oracle that caches behaviors of path suffixes.

    Paths of an interpolation run share everything after their first
    ``head`` edges, so the suffix behavior is computed once.
    """

    def __init__(self, mode: CountingMode, head: int = 5, cache_size: int = 4096):
        self.mode = mode
        self.head = head
        self.cache_size = cache_size
        self._cache: Dict[tuple, Behavior] = {}
        self.calls = 0

    def __getstate__(self):
        return {"mode": self.mode, "head": self.head, "cache_size": self.cache_size}

    def __setstate__(self, state):
        self.__init__(**state)

    def _behavior(self, probs: tuple) -> Behavior:
        if len(probs) <= self.head:
            return behavior(probs, self.mode)
        tail = probs[self.head:]
        beh = self._cache.get(tail)
        if beh is None:
            beh = behavior(tail, self.mode)
            if len(self._cache) >= self.cache_size:
                self._cache.clear()
            self._cache[tail] = beh
        return concat(behavior(probs[:self.head], self.mode), beh)

    def __call__(self, inst: Instance):
        self.calls += 1
        sub = inst.sub
        usage = []
        for e in sub.base.edges:
            probs = tuple(inst.per_path[e])
            if len(probs) != sub.eta[e]:
                raise InputError(f"edge {e!r}: expected {sub.eta[e]} probabilities")
            src, dst = sub.orientation[e]
            usage.append((src, dst, exclusive_usage(self._behavior(probs))))
        return _rationalize(_usage_sum(sub.base, usage, self.mode))


def plain_oracle(mode: CountingMode):
    """Uncached oracle built on pr_subdivision."""
    def oracle(inst: Instance):
        return _rationalize(pr_subdivision(inst.sub, inst.per_path, mode))
    return oracle


# --------------------------------------------------------------------------
# probes and linear systems
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeSet:
    rho: Tuple[tuple, ...]
    rho_odd: Optional[Tuple[tuple, ...]] = None
    decimals: int = 6

    def __post_init__(self):
        for fam in (self.rho, self.rho_odd or ()):
            for t in fam:
                if len(t) != 4 or any(not 0 <= x <= 1 for x in t):
                    raise InputError(f"probe tuple {t!r} invalid")

    @property
    def families(self) -> Tuple[Tuple[tuple, ...], ...]:
        return (self.rho,) if self.rho_odd is None else (self.rho, self.rho_odd)


def factor_matrix(rho: Sequence[tuple], m: int, N: int, mode: CountingMode,
                  edges_in_class: int) -> MonomialMatrix:
    """V for one probe family: entry (kappa, tau) = 2^{-2 m_c} prod Upsilon_kappa^tau."""
    points = tuple(upsilon(behavior(list(t), mode), N) for t in rho)
    return MonomialMatrix(points, tuple(all_types(m)), Fraction(1, 4 ** edges_in_class))


TRIVIAL_FACTOR = MonomialMatrix(((Fraction(1),) * 4,), ((0, 0, 0, 0),), Fraction(1))


def layout_factors(layout: Layout, probes: ProbeSet, m: int) -> List[MonomialMatrix]:
    out = []
    for cls, fam in zip(layout.classes, probes.families):
        if cls.trivial:
            out.append(TRIVIAL_FACTOR)
        else:
            out.append(factor_matrix(fam, m, cls.N, layout.mode, len(cls.edges)))
    return out


def draw_probe_family(rng: np.random.Generator, count: int, decimals: int) -> Tuple[tuple, ...]:
    scale = 10 ** decimals
    raw = rng.integers(1, scale, size=(count, 4))
    return tuple(tuple(Fraction(int(v), scale) for v in row) for row in raw)


@dataclass
class ProbeSearch:
    probes: ProbeSet
    factors: List[MonomialMatrix]
    retries: int


def find_invertible_probes(m: int, layout: Layout, seed: int, decimals: int = 6,
                           retry_cap: int = 10) -> ProbeSearch:
    """Seeded random decimal probes whose interpolation matrices are invertible.

    Draw order: the even family, then the odd family, from one PCG64 stream;
    a rejected draw is replaced by the next draws of the same stream.
    """
    if m < 1:
        raise InputError("m must be at least 1")
    if decimals < 1:
        raise InputError("probes need at least one decimal place")
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = (m + 1) ** 4
    for attempt in range(retry_cap + 1):
        fams = [draw_probe_family(rng, rows if not c.trivial else 1, decimals)
                for c in layout.classes]
        probes = ProbeSet(fams[0], fams[1] if layout.split else None, decimals)
        factors = layout_factors(layout, probes, m)
        if all(f.is_invertible() for f in factors):
            return ProbeSearch(probes, factors, attempt)
    raise ProbabilisticFailure(f"no invertible probe set after {retry_cap} retries")


def assemble_and_solve(factors: Sequence[MonomialMatrix], answers, m: int,
                       split: bool) -> Dict[tuple, int]:
    """Solve for the nonzero |S_tau| (or |S_{tau,tau'}|).

    ``answers`` is a flat list indexed kappa (or kappa * len(kappa') + kappa').
    """
    left = factors[0]
    right = factors[1] if split else TRIVIAL_FACTOR
    n1, n2 = left.n, right.n
    if len(answers) != n1 * n2:
        raise InputError(f"expected {n1 * n2} oracle answers, got {len(answers)}")
    rhs = [list(answers[i * n2:(i + 1) * n2]) for i in range(n1)]
    sol = kron_solve(left, right, rhs)
    out: Dict[tuple, int] = {}
    for (i, j), v in sol.values.items():
        if v.denominator != 1 or v < 0:
            raise ConstructionError(f"recovered |S| = {v} is not a nonnegative integer")
        t1 = left.exps[i]
        key = (t1, right.exps[j]) if split else t1
        out[key] = int(v)
    return out


# --------------------------------------------------------------------------
# end to end
# --------------------------------------------------------------------------

@dataclass
class ReductionResult:
    count: int
    pipeline: str
    mode: CountingMode
    m: int
    K: Optional[int]
    K_prime: Optional[int]
    seed: int
    retries: int
    oracle_calls: int
    wall_time: float
    precision: str
    type_counts: Dict[tuple, int] = field(repr=False)
    answers: List[Fraction] = field(repr=False)
    budget: Optional[PrecisionBudget] = None
    max_error: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = {
            "count": str(self.count),
            "pipeline": self.pipeline,
            "mode": self.mode.value,
            "m": self.m,
            "K": self.K,
            "K'": self.K_prime,
            "probe seed": self.seed,
            "retries": self.retries,
            "oracle calls": self.oracle_calls,
            "precision": self.precision,
            "wall time": round(self.wall_time, 3),
        }
        if self.budget is not None:
            out["z'"] = self.budget.z_prime
            out["z''"] = self.budget.z_double_prime
        return out


def thread_count() -> int:
    raw = os.environ.get("WCOUNT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"WCOUNT_THREADS must be an integer, got {raw!r}") from None


def _evaluate(oracle, instances: List[Instance], threads: int) -> List[Fraction]:
    if threads <= 1 or len(instances) < 2:
        return [oracle(inst) for inst in instances]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, len(instances) // (4 * threads))
        return list(pool.map(oracle, instances, chunksize=chunk))


def instance_grid(sub: SubdivisionMap, layout: Layout, probes: ProbeSet,
                  gadget: str = "ideal", places: Optional[int] = None) -> List[Instance]:
    """Instances in solve order: kappa major, kappa' minor."""
    fams = probes.families
    if layout.split:
        even, odd = fams
        return [build_instance(sub, layout, (a, b), gadget, places) for a in even for b in odd]
    return [build_instance(sub, layout, (a,), gadget, places) for a in fams[0]]


def run_reduction(H: Graph, sub: SubdivisionMap, mode: CountingMode, pipeline: Pipeline,
                  oracle: Callable | None = None, precision: str = "exact", seed: int = 0,
                  decimals: int = 6, retry_cap: int = 10, places_override: int | None = None,
                  threads: int | None = None, keep_ideal: bool = False) -> ReductionResult:
    """Count matchings (or edge covers) of H using only oracle calls on subdivisions.

    ``precision="exact"`` queries the ideal instances; ``"approx"`` queries the
    real instances with decimal gadget approximations and rounds each answer
    to z' places before solving.
    """
    start = time.perf_counter()
    if sub.base != H:
        raise InputError("subdivision base differs from H")
    if precision not in ("exact", "approx"):
        raise InputError(f"unknown precision policy {precision!r}")
    layout = plan_layout(sub, pipeline, mode)
    m = H.m
    if oracle is None:
        oracle = CollapseOracle(mode)
    threads = thread_count() if threads is None else threads
    search = find_invertible_probes(m, layout, seed, decimals, retry_cap)
    budget = None
    max_error = None
    if precision == "exact":
        answers = _evaluate(oracle, instance_grid(sub, layout, search.probes), threads)
    else:
        Ns = [c.N if c.N is not None else 0 for c in layout.classes]
        budget = PrecisionBudget.for_instance(m, decimals, Ns[0], Ns[-1] if len(Ns) > 1 else 0,
                                              places_override)
        gadget = "approx" if pipeline.kind == "general" else "ideal"
        raw = _evaluate(oracle, instance_grid(sub, layout, search.probes, gadget,
                                              budget.z_double_prime), threads)
        perturbed = 4 * m if gadget == "approx" else 0
        bound = telescoping_bound(perturbed, Fraction(1, 10 ** budget.z_double_prime))
        if bound >= recovery_margin(budget.z_prime):
            raise ConstructionError("precision budget too small for exact recovery")
        answers = [truncate_to_places(x, budget.z_prime) for x in raw]
        if keep_ideal:
            ideal = _evaluate(oracle, instance_grid(sub, layout, search.probes), threads)
            max_error = max(abs(a - b) for a, b in zip(raw, ideal))
    calls = len(answers)
    counts = assemble_and_solve(search.factors, answers, m, layout.split)
    total = count_from_types(counts, mode)
    ks = [c.K for c in layout.classes]
    return ReductionResult(
        count=total, pipeline=str(pipeline), mode=mode, m=m,
        K=ks[0], K_prime=ks[1] if layout.split else None, seed=seed,
        retries=search.retries, oracle_calls=calls, wall_time=time.perf_counter() - start,
        precision=precision, type_counts=counts, answers=answers, budget=budget,
        max_error=max_error)
