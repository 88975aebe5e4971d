"""Core domain types for weighted-agent package delivery on graphs.

Everything numeric is a `fractions.Fraction`: edge lengths, agent weights,
distances, costs, payments.  Exactness is load-bearing, because the
mechanism audits compare utilities with strict inequalities that must not
be blurred by rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class DeliveryError(Exception):
    """Base class for errors raised by this package."""


class LoadError(DeliveryError):
    """Invalid instance or solution data (bad JSON shape, disconnected graph, ...)."""


class StructuralError(DeliveryError):
    """A solution references unknown agents, packages or nodes.

    Distinct from infeasibility: a structurally broken solution cannot even
    be judged feasible or infeasible.
    """


class CapExceeded(DeliveryError):
    """An enumeration or search would exceed its configured resource cap."""


class Unsupported(DeliveryError):
    """The operation refuses this instance (e.g. mechanisms need k > 1)."""


# ---------------------------------------------------------------------------
# Rationals


def parse_rational(value) -> Fraction:
    """Parse a number from JSON: an int, or a string "p" / "p/q"."""
    if isinstance(value, bool):
        raise LoadError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LoadError(f"not a rational: {value!r}") from exc
    raise LoadError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    """Render exactly, as "p" for integers and "p/q" otherwise."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Instance data


@dataclass(frozen=True)
class Graph:
    """Undirected connected graph with positive rational edge lengths.

    Parallel edges are permitted; the shorter one dominates for distances.
    """

    nodes: tuple
    edges: tuple  # of (u, v, Fraction) triples

    def __post_init__(self):
        seen = set(self.nodes)
        if len(seen) != len(self.nodes):
            raise LoadError("duplicate node identifiers")
        for u, v, length in self.edges:
            if u not in seen or v not in seen:
                raise LoadError(f"edge ({u!r}, {v!r}) references unknown node")
            if u == v:
                raise LoadError(f"self-loop at node {u!r}")
            if length <= 0:
                raise LoadError(f"edge ({u!r}, {v!r}) has non-positive length")
        if self.nodes and not self._connected():
            raise LoadError("graph is not connected")

    def _connected(self) -> bool:
        adj = {u: [] for u in self.nodes}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        stack = [self.nodes[0]]
        seen = {self.nodes[0]}
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)

    def adjacency(self) -> dict:
        """node -> {neighbor: min edge length}."""
        adj: dict = {u: {} for u in self.nodes}
        for u, v, length in self.edges:
            for a, b in ((u, v), (v, u)):
                if b not in adj[a] or length < adj[a][b]:
                    adj[a][b] = length
        return adj


@dataclass(frozen=True)
class AgentSpec:
    id: int
    start: object
    weight: Fraction


@dataclass(frozen=True)
class PackageSpec:
    id: int
    source: object
    target: object


@dataclass(frozen=True)
class Instance:
    graph: Graph
    agents: tuple  # of AgentSpec, ids 1..k
    packages: tuple  # of PackageSpec, ids 1..m

    def __post_init__(self):
        nodes = set(self.graph.nodes)
        ids = [a.id for a in self.agents]
        if ids != list(range(1, len(ids) + 1)):
            raise LoadError("agent ids must be 1..k in order")
        pids = [p.id for p in self.packages]
        if pids != list(range(1, len(pids) + 1)):
            raise LoadError("package ids must be 1..m in order")
        for a in self.agents:
            if a.start not in nodes:
                raise LoadError(f"agent {a.id} starts at unknown node {a.start!r}")
            if a.weight < 0:
                raise LoadError(f"agent {a.id} has negative weight")
        for p in self.packages:
            if p.source not in nodes or p.target not in nodes:
                raise LoadError(f"package {p.id} references an unknown node")

    @property
    def k(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.packages)

    def agent(self, agent_id: int) -> AgentSpec:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise StructuralError(f"no agent with id {agent_id}")

    def package(self, package_id: int) -> PackageSpec:
        for p in self.packages:
            if p.id == package_id:
                return p
        raise StructuralError(f"no package with id {package_id}")

    def agent_ids(self) -> tuple:
        return tuple(a.id for a in self.agents)

    def true_weights(self) -> dict:
        return {a.id: a.weight for a in self.agents}

    def without_agent(self, agent_id: int) -> "Instance":
        """The instance with one agent removed.  Nodes stay; ids are kept.

        The returned instance bypasses the 1..k id check on purpose: deleted
        sub-instances keep the original agent ids so costs and payments line
        up with the full instance.
        """
        remaining = tuple(a for a in self.agents if a.id != agent_id)
        if len(remaining) == len(self.agents):
            raise StructuralError(f"no agent with id {agent_id}")
        inst = object.__new__(Instance)
        object.__setattr__(inst, "graph", self.graph)
        object.__setattr__(inst, "agents", remaining)
        object.__setattr__(inst, "packages", self.packages)
        return inst


# ---------------------------------------------------------------------------
# Distances


@dataclass(frozen=True)
class DistanceOracle:
    """All-pairs shortest-path distances, exact."""

    nodes: tuple
    _dist: dict

    def dist(self, u, v) -> Fraction:
        try:
            return self._dist[(u, v)]
        except KeyError:
            raise StructuralError(f"unknown node in distance query: {u!r} or {v!r}")

    def __call__(self, u, v) -> Fraction:
        return self.dist(u, v)


def all_pairs_distances(instance_or_graph) -> DistanceOracle:
    """Floyd-Warshall over the instance graph, with exact arithmetic."""
    graph = instance_or_graph.graph if isinstance(instance_or_graph, Instance) else instance_or_graph
    nodes = graph.nodes
    dist: dict = {}
    for u in nodes:
        for v in nodes:
            dist[(u, v)] = None
        dist[(u, u)] = Fraction(0)
    for u, v, length in graph.edges:
        for a, b in ((u, v), (v, u)):
            cur = dist[(a, b)]
            if cur is None or length < cur:
                dist[(a, b)] = length
    for w in nodes:
        for u in nodes:
            duw = dist[(u, w)]
            if duw is None:
                continue
            for v in nodes:
                dwv = dist[(w, v)]
                if dwv is None:
                    continue
                cand = duw + dwv
                cur = dist[(u, v)]
                if cur is None or cand < cur:
                    dist[(u, v)] = cand
    if any(d is None for d in dist.values()):
        raise LoadError("graph is not connected")
    return DistanceOracle(nodes=nodes, _dist=dist)


# ---------------------------------------------------------------------------
# Solutions


MOVE = "move"
PICKUP = "pickup"
DROP = "drop"


@dataclass(frozen=True)
class Action:
    """One step of an itinerary.

    A move is metric: it stands for "travel along any shortest path" to the
    target node, and travel distance accumulates dist(here, there).
    """

    kind: str
    arg: object

    def __post_init__(self):
        if self.kind not in (MOVE, PICKUP, DROP):
            raise StructuralError(f"unknown action kind {self.kind!r}")


def move(node) -> Action:
    return Action(MOVE, node)


def pickup(package_id: int) -> Action:
    return Action(PICKUP, package_id)


def drop(package_id: int) -> Action:
    return Action(DROP, package_id)


@dataclass(frozen=True)
class Solution:
    """Per-agent itineraries.  Agents without an entry are idle."""

    itineraries: tuple  # of (agent_id, tuple[Action, ...]), sorted by agent id

    @staticmethod
    def from_dict(itineraries: Mapping[int, Sequence[Action]]) -> "Solution":
        items = tuple(
            (aid, tuple(actions)) for aid, actions in sorted(itineraries.items())
        )
        return Solution(itineraries=items)

    def actions_of(self, agent_id: int) -> tuple:
        for aid, actions in self.itineraries:
            if aid == agent_id:
                return actions
        return ()

    def agent_ids(self) -> tuple:
        return tuple(aid for aid, _ in self.itineraries)


EMPTY_SOLUTION = Solution(itineraries=())


def travel_distances(instance: Instance, dist: DistanceOracle, solution: Solution) -> dict:
    """Replay each itinerary and accumulate shortest-path distances.

    Returns {agent_id: Fraction} for every agent of the instance (idle
    agents map to 0).
    """
    known = {a.id: a.start for a in instance.agents}
    out = {a.id: Fraction(0) for a in instance.agents}
    for aid, actions in solution.itineraries:
        if aid not in known:
            raise StructuralError(f"itinerary for unknown agent {aid}")
        here = known[aid]
        total = Fraction(0)
        for act in actions:
            if act.kind == MOVE:
                total += dist.dist(here, act.arg)
                here = act.arg
        out[aid] = total
    return out


@dataclass(frozen=True)
class CostBreakdown:
    per_agent: tuple  # of (agent_id, Fraction)
    total: Fraction

    def agent_cost(self, agent_id: int) -> Fraction:
        for aid, c in self.per_agent:
            if aid == agent_id:
                return c
        raise StructuralError(f"no cost entry for agent {agent_id}")

    def as_dict(self) -> dict:
        return dict(self.per_agent)


def evaluate_cost(instance: Instance, solution: Solution, weights: Mapping[int, Fraction]) -> CostBreakdown:
    """total = sum_i w_i * d_i(x), exact.

    `weights` must cover every agent that travels a nonzero distance;
    uncovered idle agents contribute nothing.
    """
    dist = all_pairs_distances(instance)
    d = travel_distances(instance, dist, solution)
    per = []
    total = Fraction(0)
    for aid in sorted(d):
        if aid in weights:
            c = weights[aid] * d[aid]
            per.append((aid, c))
            total += c
        elif d[aid] != 0:
            raise StructuralError(f"agent {aid} travels but has no weight entry")
    return CostBreakdown(per_agent=tuple(per), total=total)


def cost_of(
    instance: Instance,
    dist: DistanceOracle,
    solution: Solution,
    weights: Mapping[int, Fraction],
) -> Fraction:
    """Like evaluate_cost().total but reusing a distance oracle."""
    d = travel_distances(instance, dist, solution)
    total = Fraction(0)
    for aid, di in d.items():
        if aid in weights:
            total += weights[aid] * di
        elif di != 0:
            raise StructuralError(f"agent {aid} travels but has no weight entry")
    return total


# ---------------------------------------------------------------------------
# Feasibility


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    reason: str | None = None


_VALIDATE_STATE_CAP = 1_000_000


def validate_solution(instance: Instance, solution: Solution) -> FeasibilityReport:
    """Check the solution invariants.

    Feasible iff some global interleaving of the per-agent itineraries
    exists in which every pickup happens where the package currently lies,
    no agent ever carries two packages, and every package ends dropped at
    its target.  Unknown ids raise StructuralError instead of reporting
    infeasibility.
    """
    agent_ids = set(instance.agent_ids())
    package_ids = {p.id for p in instance.packages}
    nodes = set(instance.graph.nodes)

    itins = []
    for aid, actions in solution.itineraries:
        if aid not in agent_ids:
            raise StructuralError(f"unknown agent id {aid}")
        for act in actions:
            if act.kind == MOVE and act.arg not in nodes:
                raise StructuralError(f"agent {aid} moves to unknown node {act.arg!r}")
            if act.kind in (PICKUP, DROP) and act.arg not in package_ids:
                raise StructuralError(f"agent {aid} handles unknown package {act.arg}")
        itins.append((aid, actions))

    # Local carry discipline first: it is decidable per agent and gives the
    # clearest message.
    for aid, actions in itins:
        carrying = None
        for act in actions:
            if act.kind == PICKUP:
                if carrying is not None:
                    return FeasibilityReport(
                        False,
                        f"agent {aid} picks up package {act.arg} while carrying package {carrying}",
                    )
                carrying = act.arg
            elif act.kind == DROP:
                if carrying != act.arg:
                    return FeasibilityReport(
                        False, f"agent {aid} drops package {act.arg} it is not carrying"
                    )
                carrying = None

    # Positions after each prefix are a pure function of the index vector.
    starts = {a.id: a.start for a in instance.agents}
    pos_after = []
    for aid, actions in itins:
        seq = [starts[aid]]
        here = starts[aid]
        for act in actions:
            if act.kind == MOVE:
                here = act.arg
            seq.append(here)
        pos_after.append(seq)

    n_agents = len(itins)
    sources = {p.id: p.source for p in instance.packages}
    targets = {p.id: p.target for p in instance.packages}
    pkg_order = sorted(sources)

    init_pkgs = tuple(("n", sources[j]) for j in pkg_order)
    init = (tuple(0 for _ in itins), init_pkgs)

    def enabled(state, ai):
        indices, pkgs = state
        aid, actions = itins[ai]
        idx = indices[ai]
        if idx >= len(actions):
            return None
        act = actions[idx]
        here = pos_after[ai][idx]
        if act.kind == MOVE:
            return (act.kind, None)
        j = pkg_order.index(act.arg)
        if act.kind == PICKUP:
            if pkgs[j] != ("n", here):
                return None
            if any(p == ("c", ai) for p in pkgs):
                return None
            return (act.kind, j)
        if pkgs[j] != ("c", ai):
            return None
        return (act.kind, j)

    seen = {init}
    stack = [init]
    deepest = init
    while stack:
        state = stack.pop()
        indices, pkgs = state
        if sum(indices) > sum(deepest[0]):
            deepest = state
        if all(indices[ai] == len(itins[ai][1]) for ai in range(n_agents)):
            bad = [
                j
                for j, pid in enumerate(pkg_order)
                if pkgs[j] != ("n", targets[pid])
            ]
            if not bad:
                return FeasibilityReport(True)
            continue
        if len(seen) > _VALIDATE_STATE_CAP:
            raise CapExceeded("feasibility search exceeded its state cap")
        for ai in range(n_agents):
            step = enabled(state, ai)
            if step is None:
                continue
            kind, j = step
            new_indices = list(indices)
            new_indices[ai] += 1
            new_pkgs = pkgs
            if kind == PICKUP:
                new_pkgs = pkgs[:j] + (("c", ai),) + pkgs[j + 1 :]
            elif kind == DROP:
                here = pos_after[ai][indices[ai]]
                new_pkgs = pkgs[:j] + (("n", here),) + pkgs[j + 1 :]
            nxt = (tuple(new_indices), new_pkgs)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)

    # No interleaving completed.  Explain using the deepest state reached.
    indices, pkgs = deepest
    for ai in range(n_agents):
        aid, actions = itins[ai]
        idx = indices[ai]
        if idx < len(actions):
            act = actions[idx]
            if act.kind == PICKUP:
                return FeasibilityReport(
                    False,
                    f"agent {aid} cannot pick up package {act.arg} at "
                    f"{pos_after[ai][idx]!r} in any interleaving (handover precedence)",
                )
    for j, pid in enumerate(pkg_order):
        if pkgs[j][0] == "c":
            return FeasibilityReport(False, f"package {pid} is still being carried at the end")
        if pkgs[j] != ("n", targets[pid]):
            return FeasibilityReport(
                False, f"package {pid} ends at {pkgs[j][1]!r}, not its target {targets[pid]!r}"
            )
    return FeasibilityReport(False, "no feasible interleaving of the itineraries exists")


# ---------------------------------------------------------------------------
# Argmin helpers (fixed tie-break: first in enumeration order)


def argmin_first(items: Iterable, key):
    """First item achieving the minimum key, plus the key."""
    best = None
    best_key = None
    for it in items:
        k = key(it)
        if best_key is None or k < best_key:
            best, best_key = it, k
    if best_key is None:
        raise ValueError("argmin of empty iterable")
    return best, best_key


def argmin_set(items: Iterable, key) -> list:
    """All items achieving the minimum key (for tie-invariance checks)."""
    out: list = []
    best_key = None
    for it in items:
        k = key(it)
        if best_key is None or k < best_key:
            out, best_key = [it], k
        elif k == best_key:
            out.append(it)
    return out


# ---------------------------------------------------------------------------
# JSON serialization


def instance_to_obj(instance: Instance) -> dict:
    return {
        "graph": {
            "nodes": list(instance.graph.nodes),
            "edges": [
                {"u": u, "v": v, "len": format_rational(length)}
                for u, v, length in instance.graph.edges
            ],
        },
        "agents": [
            {"id": a.id, "start": a.start, "weight": format_rational(a.weight)}
            for a in instance.agents
        ],
        "packages": [
            {"id": p.id, "source": p.source, "target": p.target}
            for p in instance.packages
        ],
    }


def instance_from_obj(obj: dict) -> Instance:
    try:
        g = obj["graph"]
        graph = Graph(
            nodes=tuple(g["nodes"]),
            edges=tuple((e["u"], e["v"], parse_rational(e["len"])) for e in g["edges"]),
        )
        agents = tuple(
            AgentSpec(id=int(a["id"]), start=a["start"], weight=parse_rational(a["weight"]))
            for a in obj["agents"]
        )
        packages = tuple(
            PackageSpec(id=int(p["id"]), source=p["source"], target=p["target"])
            for p in obj["packages"]
        )
    except (KeyError, TypeError) as exc:
        raise LoadError(f"malformed instance object: {exc}") from exc
    return Instance(graph=graph, agents=agents, packages=packages)


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError(f"invalid JSON in {path}: {exc}") from exc
    return instance_from_obj(obj)


def save_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_obj(instance), fh, indent=2)
        fh.write("\n")


def _action_to_obj(act: Action) -> dict:
    return {act.kind: act.arg}


def _action_from_obj(obj: dict) -> Action:
    if len(obj) != 1:
        raise LoadError(f"malformed action object: {obj!r}")
    kind, arg = next(iter(obj.items()))
    if kind == MOVE:
        return move(arg)
    if kind == PICKUP:
        return pickup(int(arg))
    if kind == DROP:
        return drop(int(arg))
    raise LoadError(f"unknown action kind {kind!r}")


def solution_to_obj(solution: Solution) -> dict:
    return {
        "itineraries": [
            {"agent": aid, "actions": [_action_to_obj(a) for a in actions]}
            for aid, actions in solution.itineraries
        ]
    }


def solution_from_obj(obj: dict) -> Solution:
    try:
        itins = {
            int(entry["agent"]): [_action_from_obj(a) for a in entry["actions"]]
            for entry in obj["itineraries"]
        }
    except (KeyError, TypeError) as exc:
        raise LoadError(f"malformed solution object: {exc}") from exc
    return Solution.from_dict(itins)


def load_solution(path) -> Solution:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError(f"invalid JSON in {path}: {exc}") from exc
    return solution_from_obj(obj)


def save_solution(solution: Solution, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(solution_to_obj(solution), fh, indent=2)
        fh.write("\n")


def weights_to_obj(weights: Mapping[int, Fraction]) -> dict:
    return {str(aid): format_rational(w) for aid, w in sorted(weights.items())}


def weights_from_obj(obj: Mapping) -> dict:
    return {int(aid): parse_rational(w) for aid, w in obj.items()}


def load_weights(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise LoadError("weights file must be a JSON object of agent id -> rational")
    return weights_from_obj(obj)
