"""Compare perturbation bounds with the truncation margin for general-pipeline instances.

For each instance prints z', z'', the recovery margin 1/2 10^-z', the
telescoping bound 4m 10^-z'' and the expanded-count bound 2^{2M} 10^-z''.
"""
import argparse
import math
from dataclasses import dataclass
from fractions import Fraction

from wcount import SubdivisionMap, complete_graph, path_graph
from wcount.precision import PrecisionBudget, perturbation_bound, recovery_margin, \
    telescoping_bound


@dataclass
class MarginConfig:
    z: int = 6


def log10(x: Fraction) -> float:
    return math.log10(x.numerator) - math.log10(x.denominator)


def run(cfg: MarginConfig):
    cases = [("p2", path_graph(2), (10, 11)), ("k3", complete_graph(3), (10, 11, 12)),
             ("k3", complete_graph(3), (10, 13, 16))]
    print(f"{'graph':<5} {'eta':<14} {'z`':>5} {'z``':>5} {'margin':>8} {'telescope':>10} "
          f"{'2^2M':>8}")
    for name, g, etas in cases:
        sub = SubdivisionMap(g, dict(zip(g.edges, etas)))
        evens = [k for k in etas if k % 2 == 0]
        odds = [k for k in etas if k % 2 == 1]
        N = max(evens) - 6 if evens else 0
        Np = max(odds) - 6 if odds else 0
        b = PrecisionBudget.for_instance(g.m, cfg.z, N, Np)
        delta = Fraction(1, 10 ** b.z_double_prime)
        margin = recovery_margin(b.z_prime)
        tele = telescoping_bound(4 * g.m, delta)
        coarse = perturbation_bound(sub.expanded_edge_count(), delta)
        print(f"{name:<5} {str(etas):<14} {b.z_prime:>5} {b.z_double_prime:>5} "
              f"{log10(margin):>8.1f} {log10(tele):>10.1f} {log10(coarse):>8.1f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--z", type=int, default=MarginConfig.z)
    run(MarginConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
