"""Assignment enumeration with stacker-crane routing per agent.

Every one of the k^m ways to hand each package to an agent is considered;
a stacker-crane solver (exact or the 1.8-style approximation) fixes each
agent's delivery order.  The candidate set depends only on positions and
distances, so the final argmin over reported weights yields a truthful
mechanism.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Mapping

from ..model import CapExceeded, DistanceOracle, Instance, Solution
from ..schedules import Schedule, realize_schedule
from .apos import SolutionSet
from .scp import DEFAULT_SCP_EXACT_CAP, ScpInstance, solve_scp_approx, solve_scp_exact

DEFAULT_AK_CAP = 10_000_000


def solve_ak(
    instance: Instance,
    dist: DistanceOracle,
    weights: Mapping[int, Fraction],
    scp_mode: str = "exact",
    cap: int = DEFAULT_AK_CAP,
    scp_exact_cap: int = DEFAULT_SCP_EXACT_CAP,
) -> tuple:
    """Returns (solution, solution_set) for the chosen stacker-crane mode."""
    if scp_mode not in ("exact", "approx"):
        raise ValueError(f"unknown scp_mode {scp_mode!r}")
    live = tuple(p for p in instance.packages if p.source != p.target)
    aids = instance.agent_ids()
    k = len(aids)
    m = len(live)
    if k < 1:
        raise ValueError("need at least one agent")
    if k ** m > cap:
        raise CapExceeded(f"{k ** m} assignments exceed the cap of {cap}")

    route_cache: dict = {}

    def route(aid, pkgs):
        """Fixed, weight-independent order and length for (agent, package set)."""
        key = (aid, tuple(p.id for p in pkgs))
        if key not in route_cache:
            scp = ScpInstance(
                depot=instance.agent(aid).start,
                arcs=tuple((p.id, p.source, p.target) for p in pkgs),
                dist=dist,
            )
            if scp_mode == "exact":
                route_cache[key] = solve_scp_exact(scp, cap=scp_exact_cap)
            else:
                route_cache[key] = solve_scp_approx(scp)
        return route_cache[key]

    entries = []
    best = None
    best_cost = None
    for choice in product(aids, repeat=m):
        orders = {}
        cost = Fraction(0)
        for aid in aids:
            pkgs = tuple(p for p, owner in zip(live, choice) if owner == aid)
            order, length = route(aid, pkgs)
            orders[aid] = order
            cost += weights[aid] * length
        sched = Schedule(assignment=tuple((aid, orders[aid]) for aid in aids))
        sol = realize_schedule(instance, dist, sched)
        entries.append((repr(choice), sol))
        if best_cost is None or cost < best_cost:
            best, best_cost = sol, cost
    rset = SolutionSet(entries=tuple(entries))
    return best, rset
