"""Exact enumeration of paving matroids, their window encodings, good-set
probabilities, counting bounds, and the rank-3 variational constant."""

from .bounds import (
    BoundReport,
    bound_mnr,
    bound_sk,
    bound_skA,
    check_integral_ineq,
    check_v0v1_tradeoff,
    integral_sweep,
)
from .census import (
    Budget,
    BudgetExceeded,
    CensusResult,
    DPartition,
    HyperplaneProfile,
    InvariantViolation,
    census_by_shadow,
    count_paving,
    count_sk,
    count_sparse,
    enumerate_paving,
    hyperplane_profile,
)
from .combinatorics import (
    Subset,
    binom_lower,
    binom_sum_upper,
    rank_subset,
    shadow,
    stirling_bounds,
    unrank_subset,
)
from .encoding import (
    EncodingLemmaReport,
    NotEncodable,
    VEncoding,
    check_encoding_lemmas,
    decode,
    encode,
)
from .goodsets import (
    GoodProbResult,
    GoodSetBudget,
    MiddleProfile,
    TripleSystem,
    cond_good_prob,
    cond_good_prob_sets,
    count_good_by_profiles,
    count_good_exact,
    f_eval,
    f_max,
    f_max_dp,
    good_prob,
    hypergeom_pmf,
    is_good,
    middle_profile,
)
from .variational import (
    AdmissibleFunction,
    VariationalSolution,
    F_point,
    compute_beta,
    functional_F,
    integral_u_minus,
    solve_lambda_star,
    u_minus,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibleFunction",
    "BoundReport",
    "Budget",
    "BudgetExceeded",
    "CensusResult",
    "DPartition",
    "EncodingLemmaReport",
    "F_point",
    "GoodProbResult",
    "GoodSetBudget",
    "HyperplaneProfile",
    "InvariantViolation",
    "MiddleProfile",
    "NotEncodable",
    "Subset",
    "TripleSystem",
    "VEncoding",
    "VariationalSolution",
    "binom_lower",
    "binom_sum_upper",
    "bound_mnr",
    "bound_sk",
    "bound_skA",
    "census_by_shadow",
    "check_encoding_lemmas",
    "check_integral_ineq",
    "check_v0v1_tradeoff",
    "compute_beta",
    "cond_good_prob",
    "cond_good_prob_sets",
    "count_good_by_profiles",
    "count_good_exact",
    "count_paving",
    "count_sk",
    "count_sparse",
    "decode",
    "encode",
    "enumerate_paving",
    "f_eval",
    "f_max",
    "f_max_dp",
    "functional_F",
    "good_prob",
    "hypergeom_pmf",
    "hyperplane_profile",
    "integral_sweep",
    "integral_u_minus",
    "is_good",
    "middle_profile",
    "rank_subset",
    "shadow",
    "solve_lambda_star",
    "stirling_bounds",
    "u_minus",
    "unrank_subset",
]
