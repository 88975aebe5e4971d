"""Stacker-crane routing for a single agent's direct deliveries.

The agent starts at a depot, must traverse every directed arc (one per
package, along a shortest source-to-target path), and return.  Because
deliveries are direct, a tour is just an ordering of the arcs; its length is
the depot-to-first connection, the arc lengths, the drop-to-next-pickup
connections, and the return.

The exact solver minimizes over all arc orders.  The approximation runs two
weight-independent constructions and keeps the better order:

  * large-arcs: a minimum-cost head-to-tail matching stitches the arcs into
    cycles, which a spanning tree over cycles splices into one tour;
  * small-arcs: arcs are contracted to points, a Christofides-style tour
    (tree + odd-degree matching + Euler shortcut) orders the points, and the
    better of the two tour orientations is kept.

Both candidates are evaluated with the exact tour formula, so shortcutting
only ever helps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from ..model import CapExceeded, DistanceOracle
from .assignment import min_cost_assignment

DEFAULT_SCP_EXACT_CAP = 9


@dataclass(frozen=True)
class ScpInstance:
    """Depot plus directed arcs, with connections measured by graph distance."""

    depot: object
    arcs: tuple  # of (package_id, source, target)
    dist: DistanceOracle

    def arc_length(self, i: int) -> Fraction:
        _, s, t = self.arcs[i]
        return self.dist.dist(s, t)


def scp_tour_length(scp: ScpInstance, order: tuple) -> Fraction:
    """Length of the closed tour delivering arcs in the given order."""
    here = scp.depot
    total = Fraction(0)
    by_id = {pid: (s, t) for pid, s, t in scp.arcs}
    for pid in order:
        s, t = by_id[pid]
        total += scp.dist.dist(here, s) + scp.dist.dist(s, t)
        here = t
    total += scp.dist.dist(here, scp.depot)
    return total


def solve_scp_exact(scp: ScpInstance, cap: int = DEFAULT_SCP_EXACT_CAP) -> tuple:
    """(order, length) minimizing over all arc permutations."""
    q = len(scp.arcs)
    if q > cap:
        raise CapExceeded(f"{q} arcs exceed the exact stacker-crane cap of {cap}")
    ids = tuple(pid for pid, _, _ in scp.arcs)
    best = ()
    best_len = scp_tour_length(scp, ())
    if q == 0:
        return best, best_len
    best = None
    best_len = None
    for order in permutations(sorted(ids)):
        length = scp_tour_length(scp, order)
        if best_len is None or length < best_len:
            best, best_len = order, length
    return best, best_len


def solve_scp_approx(scp: ScpInstance) -> tuple:
    """(order, length): the better of the two constructions.

    Uses only distances, never weights, so repeated runs on the same arcs
    give the same route regardless of reports.
    """
    q = len(scp.arcs)
    if q == 0:
        return (), scp_tour_length(scp, ())
    if q == 1:
        order = (scp.arcs[0][0],)
        return order, scp_tour_length(scp, order)
    candidates = [_large_arcs_order(scp)]
    sa = _small_arcs_order(scp)
    candidates.append(sa)
    candidates.append(tuple(reversed(sa)))
    best = None
    best_len = None
    for order in candidates:
        length = scp_tour_length(scp, order)
        if best_len is None or length < best_len:
            best, best_len = order, length
    return best, best_len


# Index 0 below is a zero-length pseudo-arc at the depot, which pins the
# tour's start; it is stripped from the returned orders.


def _endpoints(scp):
    pts = [(scp.depot, scp.depot)]
    for _, s, t in scp.arcs:
        pts.append((s, t))
    return pts


def _large_arcs_order(scp: ScpInstance) -> tuple:
    pts = _endpoints(scp)
    q = len(pts)
    d = scp.dist.dist
    # Min-cost perfect matching of arc heads to arc tails -> successor map.
    matrix = [[d(pts[i][1], pts[j][0]) for j in range(q)] for i in range(q)]
    succ, _ = min_cost_assignment(matrix)

    # Decompose the successor permutation into cycles.
    cycle_of = [-1] * q
    cycles = []
    for i in range(q):
        if cycle_of[i] >= 0:
            continue
        cyc = []
        j = i
        while cycle_of[j] < 0:
            cycle_of[j] = len(cycles)
            cyc.append(j)
            j = succ[j]
        cycles.append(cyc)

    if len(cycles) > 1:
        # Connect the cycles by a spanning tree over min endpoint distances.
        def cycle_dist(a, b):
            best = None
            for i in cycles[a]:
                for j in cycles[b]:
                    for x in pts[i]:
                        for y in pts[j]:
                            cur = d(x, y)
                            if best is None or cur < best[0]:
                                best = (cur, i, j)
            return best

        n_c = len(cycles)
        in_tree = [0]
        links = []  # (cycle, attach arc in tree, attach arc in cycle)
        while len(in_tree) < n_c:
            best = None
            for a in in_tree:
                for b in range(n_c):
                    if b in in_tree:
                        continue
                    cur, i, j = cycle_dist(a, b)
                    if best is None or (cur, b) < (best[0], best[3]):
                        best = (cur, i, j, b)
            _, i, j, b = best
            in_tree.append(b)
            links.append((b, i, j))

        # Splice each attached cycle into its parent right after the
        # attachment arc.
        order = list(cycles[0])
        for b, at_i, at_j in links:
            cyc = cycles[b]
            pos = cyc.index(at_j)
            rotated = cyc[pos:] + cyc[:pos]
            here = order.index(at_i)
            order[here + 1 : here + 1] = rotated
    else:
        order = list(cycles[0])

    pos = order.index(0)
    order = order[pos + 1 :] + order[:pos]
    return tuple(scp.arcs[i - 1][0] for i in order)


def _small_arcs_order(scp: ScpInstance) -> tuple:
    pts = _endpoints(scp)
    q = len(pts)
    d = scp.dist.dist

    def node_dist(i, j):
        return min(d(x, y) for x in pts[i] for y in pts[j])

    # Spanning tree over contracted arc-points (Prim, deterministic).
    in_tree = [0]
    tree_adj = {i: [] for i in range(q)}
    while len(in_tree) < q:
        best = None
        for a in in_tree:
            for b in range(q):
                if b in in_tree:
                    continue
                cur = node_dist(a, b)
                if best is None or (cur, a, b) < best:
                    best = (cur, a, b)
        _, a, b = best
        in_tree.append(b)
        tree_adj[a].append(b)
        tree_adj[b].append(a)

    odd = sorted(i for i in range(q) if len(tree_adj[i]) % 2 == 1)
    for a, b in _min_weight_pairing(odd, node_dist):
        tree_adj[a].append(b)
        tree_adj[b].append(a)

    # Euler circuit of tree + matching, shortcut to first visits.
    multi = {i: sorted(tree_adj[i]) for i in range(q)}
    stack = [0]
    euler = []
    local = {i: list(multi[i]) for i in multi}
    while stack:
        v = stack[-1]
        if local[v]:
            u = local[v].pop(0)
            local[u].remove(v)
            stack.append(u)
        else:
            euler.append(stack.pop())
    seen = set()
    tour = []
    for v in euler:
        if v not in seen:
            seen.add(v)
            tour.append(v)

    pos = tour.index(0)
    tour = tour[pos + 1 :] + tour[:pos]
    return tuple(scp.arcs[i - 1][0] for i in tour)


def _min_weight_pairing(items: list, weight) -> list:
    """Exact minimum-weight perfect matching on a small even set.

    Bitmask DP up to 18 points; a greedy fallback beyond that (outside any
    audited size).
    """
    n = len(items)
    if n == 0:
        return []
    if n % 2 == 1:
        raise ValueError("odd set cannot be perfectly matched")
    if n > 18:
        remaining = list(items)
        pairs = []
        while remaining:
            a = remaining.pop(0)
            b = min(remaining, key=lambda x: weight(a, x))
            remaining.remove(b)
            pairs.append((a, b))
        return pairs

    full = (1 << n) - 1
    memo = {0: (Fraction(0), None)}

    def rec(mask):
        if mask in memo:
            return memo[mask][0]
        i = 0
        while not (mask >> i) & 1:
            i += 1
        best = None
        best_j = None
        for j in range(i + 1, n):
            if (mask >> j) & 1:
                rest = rec(mask & ~(1 << i) & ~(1 << j))
                cur = rest + weight(items[i], items[j])
                if best is None or cur < best:
                    best, best_j = cur, j
        memo[mask] = (best, best_j)
        return best

    rec(full)
    pairs = []
    mask = full
    while mask:
        i = 0
        while not (mask >> i) & 1:
            i += 1
        j = memo[mask][1]
        pairs.append((items[i], items[j]))
        mask &= ~(1 << i) & ~(1 << j)
    return pairs
