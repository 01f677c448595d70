"""Balanced supersaturation toolkit: pattern densities, copy enumeration,
balanced families with codegree certificates, and random Turan experiments."""

__version__ = "0.1.0"

from .enumeration import Copy, automorphism_count, count_copies, embedding_count, enumerate_copies
from .family import (
    CopyFamily,
    build_balanced_family,
    codegree_function,
    replay_audit,
    saturation_threshold,
    verify_certificate,
)
from .hypergraph import (
    Hypergraph,
    binom_ratio_bounds,
    build,
    complete_bipartite,
    complete_graph,
    cycle,
    gnp_sample,
    uniform_vertex_subset,
)
from .metrics import (
    Pattern,
    bound_formula_random_turan,
    builtin_pattern,
    compute_densities,
    compute_exponents,
)
from .turan import (
    BudgetExceeded,
    deletion_lower_bound,
    es_good_check,
    ex_exact,
    ex_random_subgraph,
    random_subset_experiment,
    random_turan_sweep,
)
