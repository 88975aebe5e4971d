"""Single-package solvers: the collaborative optimum and the lonely optimum.

The collaborative optimum relaxes nothing: agents may hand the package over
at nodes and nobody has to return home.  It is computed by a dynamic program
over (package position, carriers considered so far), with carriers taken in
nonincreasing weight order.  That ordering structure comes from prior work
and is not re-proved here, so the test suite pins this solver against the
configuration-space oracle on every small instance.

The lonely solver picks the single agent with the cheapest walk-and-carry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..model import (
    DistanceOracle,
    Instance,
    Solution,
    Unsupported,
    drop,
    move,
    pickup,
)


def _the_package(instance: Instance):
    if instance.m != 1:
        raise Unsupported("single-package solvers need exactly one package")
    return instance.packages[0]


@dataclass(frozen=True)
class SingleOptimalResult:
    solution: Solution
    cost: Fraction
    legs: tuple  # of (agent_id, pickup_node, drop_node), in carry order
    cost_two_plus: Fraction | None  # best cost using >= 2 positive-carry agents


def solve_single_optimal_full(
    instance: Instance, dist: DistanceOracle, weights: Mapping[int, Fraction]
) -> SingleOptimalResult:
    pkg = _the_package(instance)
    empty = Solution(itineraries=())
    if pkg.source == pkg.target:
        return SingleOptimalResult(solution=empty, cost=Fraction(0), legs=(), cost_two_plus=None)

    nodes = instance.graph.nodes
    # Nonincreasing weight order; ties by agent id for determinism.
    order = sorted(instance.agents, key=lambda a: (-weights[a.id], a.id))
    k = len(order)

    # State: (package node, u) with u = min(2, agents that carried a positive
    # distance so far).  One layer per carrier in order; back-pointers record
    # (previous state, leg or None).
    layer = {(pkg.source, 0): Fraction(0)}
    back: list = []
    for agent in order:
        w = weights[agent.id]
        nxt: dict = {}
        ptr: dict = {}

        def offer(key, cost, prev, leg):
            if key not in nxt or cost < nxt[key]:
                nxt[key] = cost
                ptr[key] = (prev, leg)
            elif (
                cost == nxt[key]
                and leg is not None
                and leg[1] != leg[2]
                and ptr[key][1] is None
            ):
                # On exact ties a positive carry leg displaces a skip, so
                # equal-cost handovers stay visible in the reported legs.
                ptr[key] = (prev, leg)

        for key, c in layer.items():
            offer(key, c, key, None)
        for (v, u), c in layer.items():
            base = c + w * dist.dist(agent.start, v)
            for v2 in nodes:
                u2 = min(2, u + (1 if v2 != v else 0))
                offer((v2, u2), base + w * dist.dist(v, v2), (v, u), (agent.id, v, v2))
        layer = nxt
        back.append(ptr)

    finals = [(u, layer.get((pkg.target, u))) for u in (2, 1, 0)]
    total = min(c for _, c in finals if c is not None)
    two_plus = layer.get((pkg.target, 2))

    state = next((pkg.target, u) for u, c in finals if c == total)
    legs = []
    for r in range(k - 1, -1, -1):
        prev, leg = back[r][state]
        if leg is not None:
            legs.append(leg)
        state = prev
    legs.reverse()

    itins: dict = {}
    here: dict = {}
    for aid, v, v2 in legs:
        agent = instance.agent(aid)
        actions = itins.setdefault(aid, [])
        pos = here.get(aid, agent.start)
        if v != pos:
            actions.append(move(v))
        actions.append(pickup(pkg.id))
        if v2 != v:
            actions.append(move(v2))
        actions.append(drop(pkg.id))
        here[aid] = v2
    return SingleOptimalResult(
        solution=Solution.from_dict(itins), cost=total, legs=tuple(legs), cost_two_plus=two_plus
    )


def solve_single_optimal(
    instance: Instance, dist: DistanceOracle, weights: Mapping[int, Fraction]
) -> Solution:
    return solve_single_optimal_full(instance, dist, weights).solution


def lonely_costs(
    instance: Instance, dist: DistanceOracle, weights: Mapping[int, Fraction]
) -> dict:
    """agent id -> w_i * (dist(p_i, s) + dist(s, t))."""
    pkg = _the_package(instance)
    return {
        a.id: weights[a.id] * (dist.dist(a.start, pkg.source) + dist.dist(pkg.source, pkg.target))
        for a in instance.agents
    }


def solve_single_lonely(
    instance: Instance, dist: DistanceOracle, weights: Mapping[int, Fraction]
) -> tuple:
    """(solution, selected agent id): the best single-agent delivery.

    Ties break toward the smaller agent id.
    """
    pkg = _the_package(instance)
    if pkg.source == pkg.target:
        aid = min(a.id for a in instance.agents)
        return Solution(itineraries=()), aid
    costs = lonely_costs(instance, dist, weights)
    aid = min(costs, key=lambda a: (costs[a], a))
    agent = instance.agent(aid)
    actions = []
    if agent.start != pkg.source:
        actions.append(move(pkg.source))
    actions.append(pickup(pkg.id))
    actions.append(move(pkg.target))
    actions.append(drop(pkg.id))
    return Solution.from_dict({aid: actions}), aid
