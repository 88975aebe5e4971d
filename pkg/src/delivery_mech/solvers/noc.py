"""Exact optimization over direct-delivery-with-return solutions.

The basic solver enumerates every list of k possibly-empty ordered package
lists.  The improved solver enumerates sets of lists instead and assigns
lists to agents with an exact minimum-cost bipartite matching, also solving
every (k-1)-agent subproblem along the way so Clarke pivots come for free.
Packages whose source equals their target are delivered by convention and
never scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..model import DistanceOracle, Instance, Solution, cost_of
from ..schedules import (
    DEFAULT_ENUM_CAP,
    Schedule,
    count_sets_of_lists,
    enumerate_lists_of_lists,
    enumerate_sets_of_lists,
    realize_schedule,
    schedule_travel_distance,
)
from .assignment import min_cost_assignment


def _live_ids(instance: Instance) -> tuple:
    return tuple(p.id for p in instance.packages if p.source != p.target)


def am_best_schedule(
    instance: Instance,
    dist: DistanceOracle,
    weights: Mapping[int, Fraction],
    cap: int = DEFAULT_ENUM_CAP,
) -> tuple:
    """(schedule, cost) minimizing over all schedules, first-wins on ties."""
    pids = _live_ids(instance)
    aids = instance.agent_ids()
    dcache: dict = {}

    def d(aid, lst):
        key = (aid, lst)
        if key not in dcache:
            dcache[key] = schedule_travel_distance(instance, dist, aid, lst)
        return dcache[key]

    best = None
    best_cost = None
    for sched in enumerate_lists_of_lists(
        len(pids), len(aids), package_ids=pids, agent_ids=aids, cap=cap
    ):
        cost = Fraction(0)
        for aid, lst in sched.assignment:
            if lst:
                cost += weights[aid] * d(aid, lst)
        if best_cost is None or cost < best_cost:
            best, best_cost = sched, cost
    if best is None:  # no live packages
        best = Schedule(assignment=tuple((aid, ()) for aid in aids))
        best_cost = Fraction(0)
    return best, best_cost


def solve_am_basic(
    instance: Instance,
    dist: DistanceOracle,
    weights: Mapping[int, Fraction],
    cap: int = DEFAULT_ENUM_CAP,
) -> Solution:
    """Exact minimum over the direct-delivery-with-return class."""
    sched, _ = am_best_schedule(instance, dist, weights, cap=cap)
    return realize_schedule(instance, dist, sched)


@dataclass(frozen=True)
class AmImprovedResult:
    solution: Solution
    cost: Fraction
    minus: dict  # agent_id -> (Solution, cost) optimum over the other agents


def solve_am_improved(
    instance: Instance,
    dist: DistanceOracle,
    weights: Mapping[int, Fraction],
    cap: int = DEFAULT_ENUM_CAP,
) -> AmImprovedResult:
    """Set-of-lists enumeration with exact assignment matching.

    Matches the basic solver's optimum, and records for every agent the best
    solution over the remaining k-1 agents (the Clarke pivot input).
    """
    pids = _live_ids(instance)
    aids = instance.agent_ids()
    k = len(aids)

    if not pids:
        empty = Solution(itineraries=())
        return AmImprovedResult(
            solution=empty,
            cost=Fraction(0),
            minus={aid: (empty, Fraction(0)) for aid in aids},
        )

    dcache: dict = {}

    def d(aid, lst):
        key = (aid, lst)
        if key not in dcache:
            dcache[key] = schedule_travel_distance(instance, dist, aid, lst)
        return dcache[key]

    groups = [("full", aids)] + [
        (aid, tuple(a for a in aids if a != aid)) for aid in aids
    ]
    best: dict = {tag: (None, None) for tag, _ in groups}

    count_sets_of_lists(len(pids))  # cheap; the enumerator enforces the cap
    for bundle in enumerate_sets_of_lists(len(pids), package_ids=pids, cap=cap):
        lists = sorted(bundle.lists)
        for tag, group in groups:
            if len(lists) > len(group):
                continue  # more lists than agents: infeasible for this subset
            matrix = [[weights[aid] * d(aid, lst) for aid in group] for lst in lists]
            cols, total = min_cost_assignment(matrix)
            cur_best, cur_cost = best[tag]
            if cur_cost is None or total < cur_cost:
                taken = {group[c]: lists[i] for i, c in enumerate(cols)}
                sched = Schedule(
                    assignment=tuple((aid, taken.get(aid, ())) for aid in group)
                )
                best[tag] = (sched, total)

    def realized(tag):
        sched, total = best[tag]
        if sched is None:
            # Can happen only for (k-1)-subsets that cannot host any bundle;
            # with at least one live package that means k-1 = 0.
            return Solution(itineraries=()), None
        return realize_schedule(instance, dist, sched), total

    full_sol, full_cost = realized("full")
    minus = {}
    for aid in aids:
        sol, total = realized(aid)
        if total is None:
            continue
        minus[aid] = (sol, total)
    return AmImprovedResult(solution=full_sol, cost=full_cost, minus=minus)
