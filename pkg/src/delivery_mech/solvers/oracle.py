"""Exact ground truth by shortest path over configurations.

A configuration tracks every agent's node and every package's place (a node,
or the agent carrying it).  Moves cost weight times edge length; pickups and
drops are free transitions at shared nodes.  Dijkstra over this graph gives
the exact optimum for desk-scale instances and serves as the oracle that
every other solver is tested against.

With collaboration forbidden, each package belongs to a single agent, so the
agents become independent: the optimum decomposes over package-to-agent
assignments into single-agent subproblems, which is how it is computed here.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import product
from typing import Mapping

from ..model import (
    CapExceeded,
    DistanceOracle,
    Instance,
    Solution,
    StructuralError,
    drop,
    move,
    pickup,
)

DEFAULT_ORACLE_CAP = 10_000_000


def oracle_state_bound(n: int, k: int, m: int) -> int:
    """|V|^k * (|V|+k)^m, the advertised configuration-space size."""
    return (n ** k) * ((n + k) ** m)


def _live_packages(instance: Instance):
    return [p for p in instance.packages if p.source != p.target]


def solve_oracle(
    instance: Instance,
    dist: DistanceOracle,
    weights: Mapping[int, Fraction],
    collaboration: str = "allowed",
    cap: int = DEFAULT_ORACLE_CAP,
) -> Solution:
    """Exact minimum-cost solution; collaboration is "allowed" or "forbidden"."""
    if collaboration not in ("allowed", "forbidden"):
        raise ValueError(f"unknown collaboration mode {collaboration!r}")
    for a in instance.agents:
        if a.id not in weights:
            raise StructuralError(f"no weight for agent {a.id}")
    live = _live_packages(instance)
    if not live:
        return Solution(itineraries=())
    if collaboration == "allowed":
        sol, _ = _search(instance, instance.agents, live, weights, cap)
        return sol
    return _forbidden(instance, live, weights, cap)


def _forbidden(instance, live, weights, cap):
    k = len(instance.agents)
    m = len(live)
    if k ** m > cap:
        raise CapExceeded(f"{k ** m} assignments exceed the cap of {cap}")
    cache: dict = {}

    def solo(agent, pkgs):
        # Unit weight: the search cost is then exactly the travel distance.
        key = (agent.id, tuple(p.id for p in pkgs))
        if key not in cache:
            cache[key] = _search(instance, (agent,), pkgs, {agent.id: Fraction(1)}, cap)
        return cache[key]

    best = None
    best_cost = None
    for choice in product(instance.agents, repeat=m):
        cost = Fraction(0)
        parts = []
        for agent in instance.agents:
            pkgs = [p for p, a in zip(live, choice) if a.id == agent.id]
            if not pkgs:
                continue
            sol, d = solo(agent, pkgs)
            cost += weights[agent.id] * d
            parts.append(sol)
        if best_cost is None or cost < best_cost:
            merged: dict = {}
            for part in parts:
                for aid, actions in part.itineraries:
                    merged[aid] = list(actions)
            best = Solution.from_dict(merged)
            best_cost = cost
    return best


def _search(instance, agents, live, weights, cap):
    """Dijkstra over configurations for the given agent subset.

    Returns (solution, cost).
    """
    nodes = instance.graph.nodes
    n = len(nodes)
    k = len(agents)
    m = len(live)
    bound = oracle_state_bound(n, k, m)
    if bound > cap:
        raise CapExceeded(f"configuration space of {bound} states exceeds the cap of {cap}")

    index = {u: i for i, u in enumerate(nodes)}
    adj: list = [[] for _ in range(n)]
    for u, v, length in instance.graph.edges:
        adj[index[u]].append((index[v], length))
        adj[index[v]].append((index[u], length))
    # Keep only the cheapest parallel edge per neighbor.
    for i in range(n):
        best: dict = {}
        for j, length in adj[i]:
            if j not in best or length < best[j]:
                best[j] = length
        adj[i] = sorted(best.items())

    w = [weights[a.id] for a in agents]
    start = tuple(index[a.start] for a in agents)
    init_pkgs = tuple(index[p.source] for p in live)
    targets = tuple(index[p.target] for p in live)
    CARRIED = n  # pkg state >= n means carried by agent (state - n)

    initial = (start, init_pkgs)
    dist_to: dict = {initial: Fraction(0)}
    parent: dict = {initial: None}
    counter = 0
    heap = [(Fraction(0), counter, initial)]
    goal = None
    goal_cost = None
    while heap:
        cost, _, state = heapq.heappop(heap)
        if cost > dist_to[state]:
            continue
        positions, pkgs = state
        if pkgs == targets:
            goal = state
            goal_cost = cost
            break
        for ai in range(k):
            here = positions[ai]
            carrying = None
            for j in range(m):
                if pkgs[j] == CARRIED + ai:
                    carrying = j
                    break
            for nb, length in adj[here]:
                nc = cost + w[ai] * length
                ns = (positions[:ai] + (nb,) + positions[ai + 1 :], pkgs)
                if ns not in dist_to or nc < dist_to[ns]:
                    dist_to[ns] = nc
                    parent[ns] = (state, ("move", ai, nb))
                    counter += 1
                    heapq.heappush(heap, (nc, counter, ns))
            if carrying is not None:
                ns = (positions, pkgs[:carrying] + (here,) + pkgs[carrying + 1 :])
                if ns not in dist_to or cost < dist_to[ns]:
                    dist_to[ns] = cost
                    parent[ns] = (state, ("drop", ai, carrying))
                    counter += 1
                    heapq.heappush(heap, (cost, counter, ns))
            else:
                for j in range(m):
                    if pkgs[j] == here:
                        ns = (positions, pkgs[:j] + (CARRIED + ai,) + pkgs[j + 1 :])
                        if ns not in dist_to or cost < dist_to[ns]:
                            dist_to[ns] = cost
                            parent[ns] = (state, ("pickup", ai, j))
                            counter += 1
                            heapq.heappush(heap, (cost, counter, ns))
    if goal is None:
        raise StructuralError("oracle search exhausted without delivering all packages")

    steps = []
    cur = goal
    while parent[cur] is not None:
        prev, action = parent[cur]
        steps.append(action)
        cur = prev
    steps.reverse()

    itins: dict = {}
    inv_nodes = list(nodes)
    for kind, ai, arg in steps:
        aid = agents[ai].id
        itins.setdefault(aid, [])
        if kind == "move":
            itins[aid].append(move(inv_nodes[arg]))
        elif kind == "pickup":
            itins[aid].append(pickup(live[arg].id))
        else:
            itins[aid].append(drop(live[arg].id))
    return Solution.from_dict(itins), goal_cost
