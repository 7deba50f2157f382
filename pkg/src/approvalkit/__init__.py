"""Exact solvers for multi-winner approval voting: AV, SAV, PAV and RAV,
manipulation problems, and the Independent Set to PAV reduction."""

from approvalkit.core import (
    ApprovalKitError,
    ApprovalProfile,
    DomainError,
    ElectionInstance,
    InvalidInput,
    PriorityOrder,
    ResourceGuardError,
    compare_committees,
    validate_instance,
)
from approvalkit.manipulation import (
    ExactSetGoal,
    IncludeGoal,
    ManipulationQuery,
    ManipulationResult,
    MaximizeGoal,
    UtilitySpec,
    audit_strategyproofness,
    best_response,
    sav_wm_fast,
    solve_wm,
    solve_wsm,
)
from approvalkit.pav_solver import SolveReport, pav_branch_and_bound, pav_exhaustive, pav_greedy
from approvalkit.reductions import Graph, ReductionInstance, independent_set_exists, is_to_pav, verify_reduction
from approvalkit.rules import (
    av_score,
    av_winners,
    harmonic,
    pav_score,
    rav_weight,
    rav_winners,
    sav_score,
    sav_winners,
)

__version__ = "0.1.0"
