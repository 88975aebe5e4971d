"""Position-only routing: constrained spanning forest plus doubled tours.

A virtual root is joined to every agent by a zero-length edge and each
package's source/target pair is contracted to a supernode whose internal
edge is always part of the forest.  Taking a minimum spanning tree of this
auxiliary graph and deleting the root leaves one tree per agent (the root
edges sort first among zero-length ties, so no two agents ever share a
tree).  Each agent walks its tree as a depth-first doubled tour, carrying
each package exactly on the source-to-target crossing of its supernode
edge.  Nothing here looks at weights, which is what makes the derived
mechanisms truthful.
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
    argmin_first,
    cost_of,
    drop,
    move,
    pickup,
)


@dataclass(frozen=True)
class ForestPlan:
    """One tree per agent.  Edges are ((key_a, node_a), (key_b, node_b), length)
    where keys identify terminals: ("agent", id) or ("pkg", id, "s"/"t")."""

    trees: tuple  # of (agent_id, tuple of edges)


@dataclass(frozen=True)
class SolutionSet:
    """Provenance-tagged candidate solutions, built independently of weights."""

    entries: tuple  # of (tag, Solution)

    def solutions(self) -> tuple:
        return tuple(sol for _, sol in self.entries)

    def tagged(self, tag: str) -> Solution:
        for t, sol in self.entries:
            if t == tag:
                return sol
        raise KeyError(tag)


def _pair_distance(dist, endpoints_a, endpoints_b):
    """Min distance over endpoint combinations, with the achieving pair.

    Ties break toward earlier endpoint combinations, which prefers package
    sources over targets.
    """
    best = None
    for ka, na in endpoints_a:
        for kb, nb in endpoints_b:
            d = dist.dist(na, nb)
            if best is None or d < best[0]:
                best = (d, (ka, na), (kb, nb))
    return best


def apos_forest(instance: Instance, dist: DistanceOracle) -> ForestPlan:
    """The constrained minimum spanning forest, agent by agent."""
    if instance.k < 1:
        raise Unsupported("need at least one agent")
    agents = instance.agents
    live = [p for p in instance.packages if p.source != p.target]

    # Terminal endpoint sets for the contracted auxiliary graph.
    agent_pts = {a.id: ((("agent", a.id), a.start),) for a in agents}
    pkg_pts = {
        p.id: ((("pkg", p.id, "s"), p.source), (("pkg", p.id, "t"), p.target))
        for p in live
    }

    # Candidate connections, each (length, priority, ..., edge payload).
    # Root edges carry priority 0 so Kruskal commits every agent to its own
    # component before any zero-length agent/package tie can merge two agents.
    ROOT = ("root",)
    candidates = []
    for idx, a in enumerate(agents):
        candidates.append((Fraction(0), 0, idx, 0, (ROOT, None, ("agent", a.id), a.start)))
    for ai, a in enumerate(agents):
        for pi, p in enumerate(live):
            d, end_a, end_p = _pair_distance(dist, agent_pts[a.id], pkg_pts[p.id])
            candidates.append((d, 1, ai, pi, (end_a[0], end_a[1], end_p[0], end_p[1])))
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            pi, pj = live[i], live[j]
            d, end_i, end_j = _pair_distance(dist, pkg_pts[pi.id], pkg_pts[pj.id])
            candidates.append((d, 2, i, j, (end_i[0], end_i[1], end_j[0], end_j[1])))
    candidates.sort(key=lambda c: c[:4])

    # Kruskal over components: root, one per agent, one per package supernode.
    comp = {ROOT: ROOT}
    for a in agents:
        comp[("agent", a.id)] = ("agent", a.id)
    for p in live:
        comp[("pkg", p.id)] = ("pkg", p.id)

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        comp[rx] = ry
        return True

    def comp_key(key):
        if key == ROOT or key[0] == "agent":
            return key
        return ("pkg", key[1])

    chosen = []
    for length, _, _, _, payload in candidates:
        key_a, node_a, key_b, node_b = payload
        if union(comp_key(key_a), comp_key(key_b)):
            chosen.append((length, key_a, node_a, key_b, node_b))

    # Split the spanning tree at the root into per-agent trees.
    adj: dict = {}
    for length, key_a, node_a, key_b, node_b in chosen:
        if key_a == ROOT:
            continue
        adj.setdefault(comp_key(key_a), []).append((comp_key(key_b), (key_a, node_a, key_b, node_b, length)))
        adj.setdefault(comp_key(key_b), []).append((comp_key(key_a), (key_a, node_a, key_b, node_b, length)))

    trees = []
    assigned = set()
    for a in agents:
        root_key = ("agent", a.id)
        edges = []
        stack = [root_key]
        seen = {root_key}
        while stack:
            cur = stack.pop()
            for nxt, payload in adj.get(cur, ()):
                if nxt in seen:
                    continue
                seen.add(nxt)
                key_a, node_a, key_b, node_b, length = payload
                edges.append(((key_a, node_a), (key_b, node_b), length))
                stack.append(nxt)
        for key in seen:
            if key[0] == "pkg":
                assigned.add(key[1])
                p = instance.package(key[1])
                edges.append(
                    (
                        (("pkg", p.id, "s"), p.source),
                        (("pkg", p.id, "t"), p.target),
                        dist.dist(p.source, p.target),
                    )
                )
        trees.append((a.id, tuple(edges)))
    missing = {p.id for p in live} - assigned
    if missing:
        raise Unsupported(f"packages {sorted(missing)} not reachable in the forest")
    return ForestPlan(trees=tuple(trees))


def _tour_actions(instance, agent_id, edges):
    """Doubled depth-first tour of one tree, carrying on forward crossings."""
    if not edges:
        return []
    adj: dict = {}
    for (key_a, node_a), (key_b, node_b), length in edges:
        adj.setdefault(key_a, []).append((key_b, node_a, node_b))
        adj.setdefault(key_b, []).append((key_a, node_b, node_a))
    for key in adj:
        adj[key].sort(key=lambda e: repr(e[0]))

    root = ("agent", agent_id)
    actions = []
    here = instance.agent(agent_id).start

    def cross(frm_key, to_key, frm_node, to_node):
        nonlocal here
        carrying = None
        if frm_key[0] == "pkg" and to_key[0] == "pkg" and frm_key[1] == to_key[1]:
            if frm_key[2] == "s" and to_key[2] == "t":
                carrying = frm_key[1]
        if carrying is not None:
            actions.append(pickup(carrying))
        if to_node != here:
            actions.append(move(to_node))
            here = to_node
        if carrying is not None:
            actions.append(drop(carrying))

    def visit(key, parent):
        for nxt, node_here, node_next in adj.get(key, ()):
            if nxt == parent:
                continue
            cross(key, nxt, node_here, node_next)
            visit(nxt, key)
            cross(nxt, key, node_next, node_here)

    visit(root, None)
    return actions


def solve_apos(instance: Instance, dist: DistanceOracle) -> Solution:
    """Weight-independent delivery via the constrained forest."""
    plan = apos_forest(instance, dist)
    itins = {}
    for agent_id, edges in plan.trees:
        actions = _tour_actions(instance, agent_id, edges)
        if actions:
            itins[agent_id] = actions
    return Solution.from_dict(itins)


def solve_astar(
    instance: Instance, dist: DistanceOracle, weights: Mapping[int, Fraction]
) -> tuple:
    """Best of the forest solution and its k agent-deleted variants.

    Returns (solution, solution_set).  The k+1 candidates are computed
    without looking at weights; only the final argmin uses the reports.
    """
    if instance.k <= 1:
        raise Unsupported("needs at least two agents (deleting the only agent is infeasible)")
    entries = [("x0", solve_apos(instance, dist))]
    for a in instance.agents:
        sub = instance.without_agent(a.id)
        entries.append((f"x-{a.id}", solve_apos(sub, dist)))
    rset = SolutionSet(entries=tuple(entries))
    (tag, best), _ = argmin_first(
        rset.entries, key=lambda e: cost_of(instance, dist, e[1], weights)
    )
    return best, rset
