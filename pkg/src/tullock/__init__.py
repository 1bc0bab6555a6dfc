"""Pure Nash equilibria of Tullock contests with heterogeneous elasticities."""
from .approx import (
    CandidateNodes,
    SearchReport,
    ShareItem,
    approx_subset_sum,
    build_candidate_nodes,
    choose_delta,
    search_eps_ne,
    search_eps_ne_report,
    trim_from_above,
    trim_from_below,
    verify_node,
)
from .best_response import (
    BestResponse,
    BRKind,
    PlayerThresholds,
    aggregate_range,
    b1,
    b2,
    best_response_share,
    k1_share,
    k2_share,
    rho_bound,
    share_derivative,
    thresholds,
)
from .certificates import EpsSolution, EquilibriumCertificate
from .contest import (
    ContestInstance,
    EffortProfile,
    Player,
    ProductionProfile,
    Regime,
    RegimeClass,
    classify_regime,
    cost_of_production,
    production,
    utility_effort,
    utility_production,
    winning_probabilities,
)
from .errors import *  # noqa: F401,F403
from .exact import (
    MirrorDescentConfig,
    MirrorDescentResult,
    SolveOutcome,
    Status,
    solve_mirror_descent,
    solve_mixed_regime,
    solve_small_elasticity,
)
from .hardness import (
    ReductionResult,
    SSLTInstance,
    contest_pne_oracle,
    reduce_sslt_to_contest,
    sslt_bruteforce,
    subset_sum_via_sslt_oracle,
)
from .verify import (
    LipschitzEstimates,
    VerificationReport,
    Violation,
    brute_force_pne,
    check_eps_solution,
    check_pne,
    eps_ne_bound,
    lipschitz_estimates,
    regret,
)

__version__ = "0.1.0"
