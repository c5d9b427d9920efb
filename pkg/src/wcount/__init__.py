"""Exact weighted counting of matchings and edge covers on probabilistic graphs."""
from .base import (CapacityError, ConstructionError, CountingMode, DomainError, InputError,
                   ProbabilisticFailure, WcountError)
from .graph import (Graph, ProbGraph, SubdivisionMap, complete_graph, count_brute, cycle_graph,
                    is_edge_cover, is_matching, path_graph, pr_brute, pr_subdivision, subdivide)
from .paths import Behavior, behavior, behavior_uniform_half, concat
from .interpolation import Pipeline, run_reduction

__version__ = "0.1.0"
