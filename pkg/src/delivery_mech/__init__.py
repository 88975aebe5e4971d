"""Energy-optimal package delivery by selfish weighted agents, with
truthful VCG mechanisms and an exactness-preserving audit harness."""

from .model import (
    Action,
    AgentSpec,
    CapExceeded,
    CostBreakdown,
    DeliveryError,
    DistanceOracle,
    FeasibilityReport,
    Graph,
    Instance,
    LoadError,
    PackageSpec,
    Solution,
    StructuralError,
    Unsupported,
    all_pairs_distances,
    argmin_first,
    argmin_set,
    cost_of,
    drop,
    evaluate_cost,
    format_rational,
    instance_from_obj,
    instance_to_obj,
    load_instance,
    load_solution,
    load_weights,
    move,
    parse_rational,
    pickup,
    save_instance,
    save_solution,
    solution_from_obj,
    solution_to_obj,
    travel_distances,
    validate_solution,
    weights_from_obj,
    weights_to_obj,
)
from .schedules import (
    ListBundle,
    Schedule,
    count_lists_of_lists,
    count_sets_of_lists,
    enumerate_lists_of_lists,
    enumerate_sets_of_lists,
    realize_schedule,
    schedule_travel_distance,
)
from .solvers import (
    AmImprovedResult,
    ForestPlan,
    ScpInstance,
    SingleOptimalResult,
    SolutionSet,
    apos_forest,
    lonely_costs,
    min_cost_assignment,
    scp_tour_length,
    solve_ak,
    solve_am_basic,
    solve_am_improved,
    solve_apos,
    solve_astar,
    solve_oracle,
    solve_scp_approx,
    solve_scp_exact,
    solve_single_lonely,
    solve_single_optimal,
    solve_single_optimal_full,
)
from .mechanism import (
    MECHANISM_KINDS,
    VCG_KINDS,
    Caps,
    MechanismOutcome,
    outcome_to_obj,
    run_mechanism,
    utility,
)

__version__ = "0.1.0"
