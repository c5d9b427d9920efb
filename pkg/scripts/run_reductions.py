"""Run the reduction pipelines on small base graphs and tabulate the results.

    python scripts/run_reductions.py --pipelines sub6 uniform:7 --graphs edge p2 k3
"""
import argparse
from dataclasses import dataclass, field
from typing import List

from wcount import CountingMode, SubdivisionMap, complete_graph, count_brute, cycle_graph, \
    path_graph
from wcount.interpolation import Pipeline, run_reduction

GRAPHS = {"edge": path_graph(1), "p2": path_graph(2), "p3": path_graph(3),
          "k3": complete_graph(3), "c4": cycle_graph(4)}


@dataclass
class ExperimentConfig:
    pipelines: List[str] = field(default_factory=lambda: ["sub6"])
    graphs: List[str] = field(default_factory=lambda: ["edge", "p2", "k3"])
    modes: List[str] = field(default_factory=lambda: ["matching", "edgecover"])
    general_eta: int = 10  # first edge; later edges step by one
    precision: str = "exact"
    seed: int = 0


def subdivision_for(g, pipeline: Pipeline, first: int) -> SubdivisionMap:
    if pipeline.kind == "general":
        return SubdivisionMap(g, {e: first + j for j, e in enumerate(g.edges)})
    return SubdivisionMap.uniform(g, pipeline.K)


def run(cfg: ExperimentConfig):
    print(f"{'pipeline':<10} {'graph':<5} {'mode':<10} {'count':>6} {'brute':>6} "
          f"{'calls':>6} {'retries':>7} {'seconds':>8}")
    for ptext in cfg.pipelines:
        pipeline = Pipeline.parse(ptext)
        for gname in cfg.graphs:
            g = GRAPHS[gname]
            sub = subdivision_for(g, pipeline, cfg.general_eta)
            for mname in cfg.modes:
                mode = CountingMode.parse(mname)
                res = run_reduction(g, sub, mode, pipeline, precision=cfg.precision,
                                    seed=cfg.seed)
                print(f"{ptext:<10} {gname:<5} {mname:<10} {res.count:>6} "
                      f"{count_brute(g, mode):>6} {res.oracle_calls:>6} {res.retries:>7} "
                      f"{res.wall_time:>8.2f}")


def main():
    d = ExperimentConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pipelines", nargs="+", default=d.pipelines)
    ap.add_argument("--graphs", nargs="+", default=d.graphs, choices=sorted(GRAPHS))
    ap.add_argument("--modes", nargs="+", default=d.modes)
    ap.add_argument("--general-eta", type=int, default=d.general_eta)
    ap.add_argument("--precision", default=d.precision, choices=("exact", "approx"))
    ap.add_argument("--seed", type=int, default=d.seed)
    run(ExperimentConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
