"""Second-order polynomial-filtered average consensus on weighted graphs."""
from __future__ import annotations

__version__ = "0.1.0"

from ._backend import BACKEND
from .filters import (
    FilterError,
    QuadFilter,
    StepPair,
    brute_force_mu2,
    cap_filter,
    chebyshev_rate,
    design,
    factor_steps,
    memory_slot_rate,
    optimal_p2,
    robustness_caps,
    step_stability,
)
from .graph import (
    Graph,
    GraphError,
    diameter,
    enumerate_connected_graphs,
    gen_erdos_renyi,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_star,
    square_graph,
)
from .precondition import (
    OptimizeOptions,
    PreconditionResult,
    k2m_symmetry_breaking,
    lower_bound_square,
    nonconvexity_witness,
    optimize_fssc,
    optimize_p2,
)
from .sim import Failure, Schedule, SimTrace, SimulationError, run_memory_slot, run_p2, run_standard
from .spectral import Spectrum, SpectrumError, WeightMatrix, center, spectrum, weight_matrix

__all__ = [
    "BACKEND",
    "Failure",
    "FilterError",
    "Graph",
    "GraphError",
    "OptimizeOptions",
    "PreconditionResult",
    "QuadFilter",
    "Schedule",
    "SimTrace",
    "SimulationError",
    "Spectrum",
    "SpectrumError",
    "StepPair",
    "WeightMatrix",
    "brute_force_mu2",
    "cap_filter",
    "center",
    "chebyshev_rate",
    "design",
    "diameter",
    "enumerate_connected_graphs",
    "factor_steps",
    "gen_erdos_renyi",
    "k2m_symmetry_breaking",
    "lower_bound_square",
    "make_complete",
    "make_complete_bipartite",
    "make_cycle",
    "make_path",
    "make_star",
    "memory_slot_rate",
    "nonconvexity_witness",
    "optimal_p2",
    "optimize_fssc",
    "optimize_p2",
    "robustness_caps",
    "run_memory_slot",
    "run_p2",
    "run_standard",
    "spectrum",
    "square_graph",
    "step_stability",
    "weight_matrix",
]
