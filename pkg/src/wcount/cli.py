"""Command-line entry point: ``wcount count|reduce|emulate|verify``.

Exit codes: 0 success, 1 verification failure, 2 input or precondition
error, 3 probe search exhausted its retries.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .base import CapacityError, CountingMode, InputError, ProbabilisticFailure, WcountError
from .emulation import approximate_gadget_places, build_gadget
from .fileformats import parse_graph, parse_probabilities, parse_subdivision, read_text
from .graph import count_brute, pr_brute
from .interpolation import Pipeline, plain_oracle, run_reduction
from .quadratic import format_decimal
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PROBABILISTIC = 0, 1, 2, 3


def rational_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: Optional[str] = None
    eta: Optional[str] = None
    probs: Optional[str] = None
    mode: CountingMode = CountingMode.MATCHING
    pipeline: Optional[str] = None
    seed: int = 0
    precision: str = "exact"
    out: Optional[str] = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(command=args.command, graph=args.graph, eta=getattr(args, "eta", None),
                   probs=getattr(args, "probs", None), mode=CountingMode.parse(args.mode),
                   pipeline=getattr(args, "pipeline", None), seed=getattr(args, "seed", 0),
                   precision=getattr(args, "precision", "exact"), out=getattr(args, "out", None))


def _load_graph(path):
    return parse_graph(read_text(path), str(path))[1]


def cmd_count(args) -> int:
    mode = CountingMode.parse(args.mode)
    graph = _load_graph(args.graph)
    if args.probs is None:
        print(count_brute(graph, mode, cap=args.cap))
        return EXIT_OK
    pg = parse_probabilities(read_text(args.probs), graph, args.probs)
    value = pr_brute(pg, mode, cap=args.cap)
    print(rational_str(value))
    print(format_decimal(value, args.places))
    return EXIT_OK


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def cmd_reduce(args) -> int:
    cfg = RunConfig.from_args(args)
    graph = _load_graph(cfg.graph)
    sub = parse_subdivision(read_text(cfg.eta), graph, cfg.eta)
    pipeline = Pipeline.parse(cfg.pipeline)
    oracle = plain_oracle(cfg.mode) if args.oracle == "plain" else None
    res = run_reduction(graph, sub, cfg.mode, pipeline, oracle=oracle, precision=cfg.precision,
                        seed=cfg.seed, decimals=args.decimals, retry_cap=args.retry_cap,
                        places_override=args.places_override)
    payload = json.dumps(res.to_json(), indent=2, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_emulate(args) -> int:
    mode = CountingMode.parse(args.mode)
    g = build_gadget(args.length, mode)
    approx = approximate_gadget_places(g, args.places)
    print(f"i = {g.i}  mode = {mode.value}  Sigma = {rational_str(g.Sigma)}")
    for name, exact, dec in zip("pqrs", g.values, approx):
        print(f"{name} = {exact}")
        print(f"  ~ {format_decimal(dec, args.places)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suites(args.suite, args)
    width = max(len(label) for r in results for label, _, _ in r.checks)
    for r in results:
        for label, ok, note in r.checks:
            status = "PASS" if ok else "FAIL"
            line = f"{r.name:<15} {label:<{width}}  {status}"
            if note and not ok:
                line += f"  ({note})"
            print(line)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""))
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wcount", description=__doc__.splitlines()[0])
    sp = ap.add_subparsers(dest="command", required=True)

    c = sp.add_parser("count", help="brute-force count or probability")
    c.add_argument("--graph", required=True)
    c.add_argument("--probs")
    c.add_argument("--mode", default="matching")
    c.add_argument("--places", type=int, default=10)
    c.add_argument("--cap", type=int, default=24)
    c.set_defaults(func=cmd_count)

    r = sp.add_parser("reduce", help="recover a count through the interpolation reduction")
    r.add_argument("--graph", required=True)
    r.add_argument("--eta", required=True)
    r.add_argument("--mode", default="matching")
    r.add_argument("--pipeline", default="sub6")
    r.add_argument("--precision", choices=("exact", "approx"), default="exact")
    r.add_argument("--seed", type=_seed, default=0)
    r.add_argument("--decimals", type=int, default=6)
    r.add_argument("--retry-cap", type=int, default=10)
    r.add_argument("--places-override", type=int)
    r.add_argument("--oracle", choices=("collapse", "plain"), default="collapse")
    r.add_argument("--out")
    r.set_defaults(func=cmd_reduce)

    e = sp.add_parser("emulate", help="print the emulation gadget for a length")
    e.add_argument("--length", type=int, required=True)
    e.add_argument("--places", type=int, default=30)
    e.add_argument("--mode", default="matching")
    e.set_defaults(func=cmd_emulate)

    v = sp.add_parser("verify", help="run identity suites")
    v.add_argument("--suite", nargs="+", default=["all"],
                   help=f"all or any of: {', '.join(SUITES)}")
    v.add_argument("--max-i", type=int, default=60)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProbabilisticFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROBABILISTIC
    except (InputError, CapacityError, WcountError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
