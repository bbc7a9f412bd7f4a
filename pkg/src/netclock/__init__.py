"""netclock: data-driven heterogeneous time aggregation for diffusion cascades.

Given a directed graph and observed cascades (node, time activations), find
the partition of the timeline into contiguous intervals (a "clock") that
maximizes the independent-cascade likelihood of the data, exactly (dynamic
programming) or at scale (sweep-line greedy), plus multi-clock variants
where each node follows its best clock.
"""
from .cascades import (
    Activation,
    Cascade,
    CascadeSet,
    active_at,
    compress_timeline,
    load_cascades,
)
from .clock import (
    Clock,
    clock_max,
    clock_min,
    enumerate_clocks,
    homogeneous_clock,
)
from .dp import solve_oc_dp
from .estimators import CascadeSizeFeaturizer, ClockDetector, MultiClockDetector
from .graph import Graph, load_graph
from .greedy import build_active_edges, solve_oc_greedy
from .likelihood import (
    ICParams,
    activation_loglik,
    delta_for_cut,
    improvement,
    nonactivation_loglik,
    total_loglik,
)
from .multiclock import (
    MultiClockSolution,
    assign_nodes,
    multi_improvement,
    solve_koc,
)
from .oracle import oracle_koc, oracle_oc
from .simulate import SimConfig, generate_cascades, generate_graph, sample_cascade, stretch

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "Cascade",
    "CascadeSet",
    "CascadeSizeFeaturizer",
    "Clock",
    "ClockDetector",
    "Graph",
    "ICParams",
    "MultiClockDetector",
    "MultiClockSolution",
    "SimConfig",
    "activation_loglik",
    "active_at",
    "assign_nodes",
    "build_active_edges",
    "clock_max",
    "clock_min",
    "compress_timeline",
    "delta_for_cut",
    "enumerate_clocks",
    "generate_cascades",
    "generate_graph",
    "homogeneous_clock",
    "improvement",
    "load_cascades",
    "load_graph",
    "multi_improvement",
    "nonactivation_loglik",
    "oracle_koc",
    "oracle_oc",
    "sample_cascade",
    "solve_koc",
    "solve_oc_dp",
    "solve_oc_greedy",
    "stretch",
    "total_loglik",
]
