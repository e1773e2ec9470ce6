"""Hop-bounded reachability shortcuts for grid-embedded posets.

Construction of two-hop shortcut graphs with dyadic relay vertices,
validity verification, relay elimination, exact sparsest-spanner search,
exact-rational dual lower-bound certificates, and randomized jump-counting
experiments. See the README for the CLI.
"""

__version__ = "0.1.0"

from .build import (
    PrefixCode,
    SpannerGraph,
    bipartite_poset,
    bipartite_single_steiner,
    build_steiner_2tc,
    lcp_point,
    load_spanner,
    path_query,
    prefix_code,
    prefix_point,
    save_spanner,
    spanner_ell,
)
from .dualbound import (
    DualCertificate,
    IntegralReport,
    certify,
    constraint1_lhs,
    integral_check,
    objective_closed_form,
    volume,
    yhat,
    yprime_ydprime,
)
from .jumps import (
    BoxId,
    Jump,
    JumpSet,
    JumpStats,
    MappingReport,
    RandomPosetSpec,
    box_location,
    enumerate_jumps,
    jump_edge_mapping,
    monte_carlo_jumps,
    sample_poset,
)
from .oracle import (
    OracleResult,
    min_2tc_bruteforce,
    min_ktc_bruteforce,
)
from .poset import (
    Poset,
    canonicalize_embedding,
    dominance_leq,
    hypergrid,
    iter_comparable_pairs,
    load_poset,
    save_poset,
    transitive_closure,
)
from .verify import (
    VerificationReport,
    Violation,
    componentwise_max,
    grid_spanner_from_steiner,
    is_steiner_ktc,
    replace_steiner,
    steiner_ancestors,
)
