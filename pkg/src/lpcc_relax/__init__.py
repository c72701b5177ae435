"""Linear relaxations of LPs with complementarity constraints.

Build plain, edge-based and vertex-cover-based relaxations of an LPCC over
its conflict graph, strengthen them with stable-set / clique / BQP odd-cycle
cuts, and benchmark the resulting bounds against an exact branch-and-bound
solver.
"""

from .model import (Direction, FeasibilityReport, LinearModel, LpccInstance,
                    Row, Sense, Solution, SolutionStatus, VarKey, evaluate,
                    from_json, load, normalize, save, to_json, validate)
from .graph import (ConflictGraph, CoverPartition, NotACover,
                    approx_min_vertex_cover, erdos_renyi,
                    feasible_cover_partition, maximal_cliques, odd_antiholes,
                    odd_holes, singleton_partition)
from .simplex import LpResult, LpStatus, NumericalBreakdown, export_lp_file
from . import simplex
from .relax import (InfeasiblePartition, RelaxationArtifact, RelaxationKind,
                    UnboundedRelaxation, build_cover_relaxation,
                    build_edge_relaxation, build_lp_relaxation, check_point,
                    conflict_graph_of, lift_point,
                    objective_bound_ordering_check)
from .cuts import (Cut, CutFamily, apply_cuts, bqp_violated_cuts,
                   clique_q_cuts, dump_cut_pool, iterate_bqp_separation,
                   stable_set_cuts)
from .exact import (brute_force_oracle, export_bigM_mip,
                    harvest_feasible_points, solve_exact)
from .generate import Family, GenSpec, generate
from .bench import Method, method_pipeline, run_experiment

__version__ = "0.1.0"

__all__ = [
    "Direction", "FeasibilityReport", "LinearModel", "LpccInstance", "Row",
    "Sense", "Solution", "SolutionStatus", "VarKey", "evaluate", "from_json",
    "load", "normalize", "save", "to_json", "validate",
    "ConflictGraph", "CoverPartition", "NotACover", "approx_min_vertex_cover",
    "erdos_renyi", "feasible_cover_partition", "maximal_cliques",
    "odd_antiholes", "odd_holes", "singleton_partition",
    "LpResult", "LpStatus", "NumericalBreakdown", "export_lp_file", "simplex",
    "InfeasiblePartition", "RelaxationArtifact", "RelaxationKind",
    "UnboundedRelaxation", "build_cover_relaxation", "build_edge_relaxation",
    "build_lp_relaxation", "check_point", "conflict_graph_of", "lift_point",
    "objective_bound_ordering_check",
    "Cut", "CutFamily", "apply_cuts", "bqp_violated_cuts", "clique_q_cuts",
    "dump_cut_pool", "iterate_bqp_separation", "stable_set_cuts",
    "brute_force_oracle", "export_bigM_mip", "harvest_feasible_points",
    "solve_exact",
    "Family", "GenSpec", "generate",
    "Method", "method_pipeline", "run_experiment",
]
