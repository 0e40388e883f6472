"""Exact global and seed-anchored densest subhypergraph discovery via minimum cuts."""

from .baselines import (WeightedGraph, clique_expand, greedy_peeling, make_locality_counterexample,
                        make_peeling_counterexample, solve_ads_graph)
from .estimators import AnchoredDensestSubhypergraph, DensestSubhypergraph
from .hypergraph import (Hypergraph, HypergraphFormatError, degree_stats, load_hypergraph,
                         neighborhoods, preprocess)
from .local import clamp_threshold, local_min_cut, solve_adsh_fallback, solve_adsh_local
from .maxflow import FlowNetwork, max_flow_min_cut
from .objectives import ObjectiveSpec, evaluate_objective
from .reduction import build_anchored_network, build_global_network, build_signed_network, decide
from .solvers import (SolveReport, SolverError, binary_search, density_improvement,
                      shift_to_nonnegative, solve)
from .synth import f1, generate_planted, run_planted_benchmark, sample_seed_set

__version__ = "0.1.0"

__all__ = [
    "AnchoredDensestSubhypergraph", "DensestSubhypergraph", "FlowNetwork", "Hypergraph",
    "HypergraphFormatError", "ObjectiveSpec", "SolveReport", "SolverError", "WeightedGraph",
    "binary_search", "build_anchored_network", "build_global_network", "build_signed_network",
    "clamp_threshold", "clique_expand", "decide", "degree_stats", "density_improvement",
    "evaluate_objective", "f1", "generate_planted", "greedy_peeling", "load_hypergraph",
    "local_min_cut", "make_locality_counterexample", "make_peeling_counterexample",
    "max_flow_min_cut", "neighborhoods", "preprocess", "run_planted_benchmark",
    "sample_seed_set", "shift_to_nonnegative", "solve", "solve_ads_graph",
    "solve_adsh_fallback", "solve_adsh_local",
]
