"""Exact analysis of cellular automata on finite rectangular supports:
reachable-pattern counts, information loss, orphan certificates, the 1D
surjectivity decision, and a standalone multivariate Fekete-lemma engine
for coordinate-wise subadditive functions."""

from .subadditive import (
    FeketeEstimate,
    MultiIndex,
    SubadditiveFn,
    Violation,
    as_index,
    check_subadditivity,
    check_subadditivity_on_table,
    decomposition_bound,
    diagonal_schedule,
    fekete_limit_estimate,
    geometric_schedule,
    leq_pi,
    running_infimum,
    subadditivity_triple_count,
)
from .ca import (
    BUILTIN_NAMES,
    CellularAutomaton,
    Pattern,
    Region,
    RightPolytope,
    bounding_sides,
    decode_states,
    encode_states,
    induced_map,
    make_builtin,
    minkowski_sum,
    translate_support,
)
from .counting import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Decision1D,
    OrphanCertificate,
    OutRecord,
    decide_surjectivity_1d,
    find_orphan,
    out_size_bruteforce,
    out_size_transfer_1d,
)
from .analysis import (
    LambdaEstimate,
    LossRecord,
    SurjectivityVerdict,
    ThresholdReport,
    VerdictStatus,
    boundary_excess,
    excess_ratio_threshold,
    lambda_estimate,
    log_base,
    loss,
    minimal_upward_threshold,
    surjectivity_report,
    theorem2_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "MultiIndex", "as_index", "leq_pi", "SubadditiveFn", "Violation",
    "FeketeEstimate", "subadditivity_triple_count", "check_subadditivity",
    "check_subadditivity_on_table", "running_infimum", "decomposition_bound",
    "fekete_limit_estimate", "diagonal_schedule", "geometric_schedule",
    "CellularAutomaton", "RightPolytope", "Pattern", "Region",
    "encode_states", "decode_states", "bounding_sides", "minkowski_sum",
    "induced_map", "translate_support", "make_builtin", "BUILTIN_NAMES",
    "DEFAULT_BUDGET", "BudgetExceeded", "OutRecord", "OrphanCertificate",
    "Decision1D", "out_size_bruteforce", "out_size_transfer_1d",
    "find_orphan", "decide_surjectivity_1d",
    "LossRecord", "LambdaEstimate", "ThresholdReport", "VerdictStatus",
    "SurjectivityVerdict", "log_base", "loss", "lambda_estimate",
    "boundary_excess", "minimal_upward_threshold", "excess_ratio_threshold",
    "theorem2_threshold", "surjectivity_report",
]
