"""Tabulate emulation gadgets: decimal values, Sigma and the behavior error of approximations."""
import argparse
import math
from dataclasses import dataclass

from wcount import CountingMode
from wcount.emulation import approximate_gadget_places, build_gadget, check_fib_inequalities
from wcount.paths import behavior, behavior_uniform_half


@dataclass
class GadgetConfig:
    max_i: int = 30
    places: int = 12
    mode: str = "matching"


def run(cfg: GadgetConfig):
    mode = CountingMode.parse(cfg.mode)
    print(f"{'i':>3} {'p':>16} {'q':>16} {'r':>16} {'s':>16} {'log10 behavior err':>19}")
    for i in range(4, cfg.max_i + 1, 2):
        g = build_gadget(i, mode)
        approx = approximate_gadget_places(g, cfg.places)
        got = behavior(list(approx), mode).as_tuple()
        want = behavior_uniform_half(i, mode).as_tuple()
        err = max(abs(a - b) for a, b in zip(got, want))
        col = "exact" if err == 0 else \
            f"{math.log10(err.numerator) - math.log10(err.denominator):.1f}"
        vals = " ".join(f"{float(x):>16.12f}" for x in approx)
        print(f"{i:>3} {vals} {col:>19}")
    rep = check_fib_inequalities(200)
    print(f"\nforsigma holds from n = {rep.forsigma_threshold}; "
          f"2-vs-phi thresholds {rep.phi_thresholds}")


def main():
    d = GadgetConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-i", type=int, default=d.max_i)
    ap.add_argument("--places", type=int, default=d.places)
    ap.add_argument("--mode", default=d.mode)
    run(GadgetConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
