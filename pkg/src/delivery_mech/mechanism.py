"""VCG payment engine with Clarke pivots.

Each mechanism kind wraps one solver family.  The algorithm runs on the
reported weights; the pivot term for agent i is the cost of the same
algorithm on the instance with agent i removed (nodes stay, the agent
goes), evaluated under the other agents' reports.  Payments follow

    P_i = Q_i(w'_{-i}) - sum_{j != i} w'_j d_j(chosen).

"apos-naive" glues these payments onto the position-only algorithm even
though no payment rule can make it both truthful and individually rational;
it exists so the audit can demonstrate that failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .model import (
    DistanceOracle,
    Instance,
    Solution,
    StructuralError,
    Unsupported,
    all_pairs_distances,
    cost_of,
    format_rational,
    solution_to_obj,
    travel_distances,
)
from .schedules import DEFAULT_ENUM_CAP
from .solvers import (
    solve_ak,
    solve_am_improved,
    solve_apos,
    solve_astar,
    solve_single_lonely,
    solve_single_optimal_full,
)
from .solvers.oracle import DEFAULT_ORACLE_CAP

ASTAR = "astar"
AM = "am"
AK_EXACT = "ak-exact"
AK_APPROX = "ak-approx"
SINGLE_OPT = "single-opt"
SINGLE_LONELY = "single-lonely"
APOS_NAIVE = "apos-naive"

MECHANISM_KINDS = (ASTAR, AM, AK_EXACT, AK_APPROX, SINGLE_OPT, SINGLE_LONELY, APOS_NAIVE)
VCG_KINDS = (ASTAR, AM, AK_EXACT, AK_APPROX, SINGLE_OPT, SINGLE_LONELY)


@dataclass(frozen=True)
class MechanismOutcome:
    kind: str
    solution: Solution
    payments: dict  # agent id -> Fraction
    pivots: dict  # agent id -> Fraction, Q_i(w'_{-i})
    utilities: dict  # agent id -> Fraction under the reported weights
    distances: dict  # agent id -> Fraction, d_i(chosen)
    social_cost: Fraction
    pivot_solutions: dict  # agent id -> Solution of the agent-deleted run


@dataclass(frozen=True)
class Caps:
    enum: int = DEFAULT_ENUM_CAP
    oracle: int = DEFAULT_ORACLE_CAP


def _without(weights: Mapping[int, Fraction], agent_id: int) -> dict:
    return {a: w for a, w in weights.items() if a != agent_id}


def _chosen_and_pivots(kind, instance, dist, reported, caps):
    """Run the kind's algorithm and its k agent-deleted runs.

    Returns (chosen solution, {i: pivot solution}).
    """
    if kind == ASTAR:
        best, _ = solve_astar(instance, dist, reported)
        pivots = {}
        for a in instance.agents:
            pivots[a.id] = solve_apos(instance.without_agent(a.id), dist)
        return best, pivots
    if kind == AM:
        res = solve_am_improved(instance, dist, reported, cap=caps.enum)
        return res.solution, {aid: sol for aid, (sol, _) in res.minus.items()}
    if kind in (AK_EXACT, AK_APPROX):
        mode = "exact" if kind == AK_EXACT else "approx"
        best, _ = solve_ak(instance, dist, reported, scp_mode=mode, cap=caps.enum)
        pivots = {}
        for a in instance.agents:
            sub = instance.without_agent(a.id)
            sub_best, _ = solve_ak(sub, dist, _without(reported, a.id), scp_mode=mode, cap=caps.enum)
            pivots[a.id] = sub_best
        return best, pivots
    if kind == SINGLE_OPT:
        best = solve_single_optimal_full(instance, dist, reported).solution
        pivots = {}
        for a in instance.agents:
            sub = instance.without_agent(a.id)
            pivots[a.id] = solve_single_optimal_full(sub, dist, _without(reported, a.id)).solution
        return best, pivots
    if kind == SINGLE_LONELY:
        best, _ = solve_single_lonely(instance, dist, reported)
        pivots = {}
        for a in instance.agents:
            sub = instance.without_agent(a.id)
            sub_best, _ = solve_single_lonely(sub, dist, _without(reported, a.id))
            pivots[a.id] = sub_best
        return best, pivots
    if kind == APOS_NAIVE:
        best = solve_apos(instance, dist)
        pivots = {}
        for a in instance.agents:
            pivots[a.id] = solve_apos(instance.without_agent(a.id), dist)
        return best, pivots
    raise ValueError(f"unknown mechanism kind {kind!r}")


def run_mechanism(
    kind: str,
    instance: Instance,
    reported: Mapping[int, Fraction],
    caps: Caps = Caps(),
    dist: DistanceOracle | None = None,
) -> MechanismOutcome:
    """Select, route and pay the agents under the reported weights."""
    if instance.k <= 1:
        raise Unsupported("mechanisms need at least two agents")
    for a in instance.agents:
        if a.id not in reported:
            raise StructuralError(f"no reported weight for agent {a.id}")
    if dist is None:
        dist = all_pairs_distances(instance)

    chosen, pivot_solutions = _chosen_and_pivots(kind, instance, dist, reported, caps)
    d = travel_distances(instance, dist, chosen)
    social = sum((reported[a.id] * d[a.id] for a in instance.agents), Fraction(0))

    payments = {}
    pivots = {}
    utilities = {}
    for a in instance.agents:
        others = _without(reported, a.id)
        q = cost_of(instance, dist, pivot_solutions[a.id], others)
        pivots[a.id] = q
        pay = q - (social - reported[a.id] * d[a.id])
        payments[a.id] = pay
        utilities[a.id] = pay - reported[a.id] * d[a.id]
    return MechanismOutcome(
        kind=kind,
        solution=chosen,
        payments=payments,
        pivots=pivots,
        utilities=utilities,
        distances=d,
        social_cost=social,
        pivot_solutions=pivot_solutions,
    )


def utility(outcome: MechanismOutcome, true_weights: Mapping[int, Fraction]) -> dict:
    """u_i = P_i - w_i * d_i(chosen) under the true weights."""
    return {
        aid: outcome.payments[aid] - true_weights[aid] * outcome.distances[aid]
        for aid in outcome.payments
    }


def outcome_to_obj(outcome: MechanismOutcome, true_utilities: Mapping[int, Fraction] | None = None) -> dict:
    obj = {
        "mechanism": outcome.kind,
        "solution": solution_to_obj(outcome.solution),
        "payments": {str(a): format_rational(x) for a, x in sorted(outcome.payments.items())},
        "pivots": {str(a): format_rational(x) for a, x in sorted(outcome.pivots.items())},
        "utilities": {str(a): format_rational(x) for a, x in sorted(outcome.utilities.items())},
        "total_payment": format_rational(sum(outcome.payments.values(), Fraction(0))),
        "social_cost": format_rational(outcome.social_cost),
    }
    if true_utilities is not None:
        obj["true_utilities"] = {
            str(a): format_rational(x) for a, x in sorted(true_utilities.items())
        }
    return obj
