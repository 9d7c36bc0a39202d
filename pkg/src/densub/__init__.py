"""Dense subgraph detection and low-outdegree orientation, simulated in the
LOCAL and CONGEST message-passing models and verified against exact
centralized oracles."""

from .decompose import Clustering, ldd, ldd_traced
from .detect_congest import approx_densest, congest_detect
from .detect_local import (
    DetectionOutput,
    DirectedDetectionOutput,
    local_detect,
    local_detect_directed,
)
from .engine import (
    RoundTrace,
    SimConfig,
    VertexProgram,
    collect_ball,
    component_min,
    component_or,
    component_sum,
    knowledge_states,
    msg_bits,
    run,
)
from .graphs import (
    DirectedDensity,
    DirectedGraph,
    Graph,
    Rational,
    Subset,
    density,
    directed_density,
    generate,
    lowerbound_pair,
    read_edge_list,
    write_edge_list,
)
from .mwu import (
    DualSolution,
    alpha_bit_width,
    fractional_dual,
    integral_primal,
)
from .oracle import (
    OracleResult,
    brute_densest,
    brute_directed_densest,
    exact_densest,
    min_max_outdegree,
)
from .orient import (
    Orientation,
    PathDecomposition,
    directed_split,
    orient_low_outdegree,
    path_decompose,
    weak_orientation,
)

__all__ = [
    "Clustering",
    "ldd",
    "ldd_traced",
    "approx_densest",
    "congest_detect",
    "DetectionOutput",
    "DirectedDetectionOutput",
    "local_detect",
    "local_detect_directed",
    "RoundTrace",
    "SimConfig",
    "VertexProgram",
    "collect_ball",
    "component_min",
    "component_or",
    "component_sum",
    "knowledge_states",
    "msg_bits",
    "run",
    "DirectedDensity",
    "DirectedGraph",
    "Graph",
    "Rational",
    "Subset",
    "density",
    "directed_density",
    "generate",
    "lowerbound_pair",
    "read_edge_list",
    "write_edge_list",
    "DualSolution",
    "alpha_bit_width",
    "fractional_dual",
    "integral_primal",
    "OracleResult",
    "brute_densest",
    "brute_directed_densest",
    "exact_densest",
    "min_max_outdegree",
    "Orientation",
    "PathDecomposition",
    "directed_split",
    "orient_low_outdegree",
    "path_decompose",
    "weak_orientation",
]

__version__ = "0.1.0"
