"""Delivery algorithms: position-only forest routing, restricted-class exact
solvers, stacker-crane subroutines, single-package algorithms, and the
configuration-space ground-truth oracle."""

from .assignment import min_cost_assignment
from .oracle import solve_oracle, oracle_state_bound
from .apos import ForestPlan, SolutionSet, apos_forest, solve_apos, solve_astar
from .noc import AmImprovedResult, solve_am_basic, solve_am_improved, am_best_schedule
from .scp import (
    ScpInstance,
    scp_tour_length,
    solve_scp_exact,
    solve_scp_approx,
)
from .ak import solve_ak
from .single import (
    SingleOptimalResult,
    solve_single_optimal,
    solve_single_optimal_full,
    solve_single_lonely,
    lonely_costs,
)

__all__ = [
    "min_cost_assignment",
    "solve_oracle",
    "oracle_state_bound",
    "ForestPlan",
    "SolutionSet",
    "apos_forest",
    "solve_apos",
    "solve_astar",
    "AmImprovedResult",
    "solve_am_basic",
    "solve_am_improved",
    "am_best_schedule",
    "ScpInstance",
    "scp_tour_length",
    "solve_scp_exact",
    "solve_scp_approx",
    "solve_ak",
    "SingleOptimalResult",
    "solve_single_optimal",
    "solve_single_optimal_full",
    "solve_single_lonely",
    "lonely_costs",
]
