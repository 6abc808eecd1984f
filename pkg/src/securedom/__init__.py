"""Secure domination toolkit.

Bitmask graphs, class recognisers with certificates, brute-force oracles,
closed-form and polynomial solvers, and the hardness reductions with their
solution lifts.
"""
from .domination import (
    DefenseCertificate,
    defenders,
    epn,
    gamma,
    gamma_s,
    greedy_secure_dominating,
    is_dominating,
    is_secure,
    is_secure_dominating,
    min_dominating_brute,
    min_secure_dominating_brute,
)
from .errors import (
    ClaimViolation,
    ClassError,
    DependencyError,
    DisconnectedError,
    GraphInputError,
    PreconditionError,
    SecureDomError,
    SizeLimitError,
)
from .generators import InstanceSpec, generate
from .graph import Graph, build_graph, format_edge_list, parse_edge_list
from .recognition import (
    BisplitPartition,
    ChainPartition,
    ConvexityWitness,
    SplitPartition,
    check_chordal_bisplit,
    check_pi_convexity,
    find_star_witness,
    is_chordal,
    is_chordal_bipartite,
    recognize_bisplit,
    recognize_chain,
    recognize_split,
)
from .reductions import (
    Reduction,
    approx_msd_split,
    bisplit_dd_to_sdd,
    build_reduction,
    cbip_sdd_to_cbip_bisplit_sdd,
    lift_solution,
    split_dd_to_sdd,
    split_sdd_to_bisplit_sdd,
)
from .solvers import SolveResult, gamma_s_complete_bipartite, solve_chain, solve_chordal_bisplit

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
