"""Non-collaborative solutions encoded as lists of package lists.

A Schedule assigns every (non-degenerate) package to exactly one agent and
fixes each agent's delivery order.  Realizing a schedule produces the
cheapest solution that respects it: direct source-to-target carries along
shortest paths, and every used agent returns to its start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from typing import Iterator, Sequence

from .model import (
    CapExceeded,
    DistanceOracle,
    Instance,
    Solution,
    StructuralError,
    drop,
    move,
    pickup,
)

DEFAULT_ENUM_CAP = 10_000_000


@dataclass(frozen=True)
class Schedule:
    """One ordered package list per agent, jointly partitioning the packages."""

    assignment: tuple  # of (agent_id, tuple of package ids)

    def list_of(self, agent_id: int) -> tuple:
        for aid, lst in self.assignment:
            if aid == agent_id:
                return lst
        raise StructuralError(f"schedule has no entry for agent {agent_id}")


@dataclass(frozen=True)
class ListBundle:
    """A set of non-empty ordered package lists, not yet assigned to agents."""

    lists: frozenset  # of tuples of package ids


def schedule_travel_distance(
    instance: Instance, dist: DistanceOracle, agent_id: int, ordered: Sequence[int]
) -> Fraction:
    """Travel distance of one agent delivering `ordered` directly, with return.

    dist(p, s_1) + sum dist(s_j, t_j) + sum dist(t_j, s_{j+1}) + dist(t_last, p).
    """
    ordered = tuple(ordered)
    if len(set(ordered)) != len(ordered):
        raise StructuralError("package list contains duplicates")
    if not ordered:
        return Fraction(0)
    agent = instance.agent(agent_id)
    total = Fraction(0)
    here = agent.start
    for pid in ordered:
        pkg = instance.package(pid)
        total += dist.dist(here, pkg.source) + dist.dist(pkg.source, pkg.target)
        here = pkg.target
    total += dist.dist(here, agent.start)
    return total


def realize_schedule(instance: Instance, dist: DistanceOracle, schedule: Schedule) -> Solution:
    """Build the explicit itinerary for a schedule.

    Zero-length moves are skipped, so the itinerary is minimal; the replayed
    distance equals schedule_travel_distance for every agent.
    """
    itins = {}
    for aid, ordered in schedule.assignment:
        if not ordered:
            continue
        agent = instance.agent(aid)
        actions = []
        here = agent.start
        for pid in ordered:
            pkg = instance.package(pid)
            if pkg.source != here:
                actions.append(move(pkg.source))
                here = pkg.source
            actions.append(pickup(pid))
            if pkg.target != here:
                actions.append(move(pkg.target))
                here = pkg.target
            actions.append(drop(pid))
        if here != agent.start:
            actions.append(move(agent.start))
        itins[aid] = actions
    return Solution.from_dict(itins)


def schedule_to_obj(schedule: Schedule) -> list:
    """Arrays-of-arrays rendering for debugging: [[agent, [pids...]], ...]."""
    return [[aid, list(lst)] for aid, lst in schedule.assignment]


def count_lists_of_lists(m: int, k: int) -> int:
    """m! * C(m+k-1, k-1)."""
    return math.factorial(m) * math.comb(m + k - 1, k - 1)


def count_sets_of_lists(m: int) -> int:
    """Number of partitions of m items into non-empty ordered blocks.

    Satisfies a(n) = (2n-1) a(n-1) - (n-1)(n-2) a(n-2); 1, 3, 13, 73, 501, ...
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    a, b = 1, 1  # a(0), a(1)
    if m == 0:
        return a
    for n in range(2, m + 1):
        a, b = b, (2 * n - 1) * b - (n - 1) * (n - 2) * a
    return b


def enumerate_lists_of_lists(
    m: int, k: int, *, package_ids: Sequence[int] | None = None,
    agent_ids: Sequence[int] | None = None, cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[Schedule]:
    """Every list of exactly k (possibly empty) ordered lists, exactly once.

    Deterministic order: permutations of the package ids lexicographically,
    then delimiter positions lexicographically.  By default packages are
    1..m and agents 1..k.
    """
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    pids = tuple(package_ids) if package_ids is not None else tuple(range(1, m + 1))
    aids = tuple(agent_ids) if agent_ids is not None else tuple(range(1, k + 1))
    if len(pids) != m or len(aids) != k:
        raise ValueError("id sequences must have lengths m and k")
    total = count_lists_of_lists(m, k)
    if total > cap:
        raise CapExceeded(f"{total} schedules exceed the cap of {cap}")
    for perm in permutations(sorted(pids)):
        for cuts in combinations_with_replacement(range(m + 1), k - 1):
            bounds = (0,) + cuts + (m,)
            yield Schedule(
                assignment=tuple(
                    (aids[i], perm[bounds[i] : bounds[i + 1]]) for i in range(k)
                )
            )


def _set_partitions(items: tuple) -> Iterator[list]:
    """Canonical set-partition enumeration: place items one by one into an
    existing block or a new block."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]

    def extend(blocks, remaining):
        if not remaining:
            yield [tuple(b) for b in blocks]
            return
        x, tail = remaining[0], remaining[1:]
        for i in range(len(blocks)):
            blocks[i].append(x)
            yield from extend(blocks, tail)
            blocks[i].pop()
        blocks.append([x])
        yield from extend(blocks, tail)
        blocks.pop()

    yield from extend([[first]], rest)


def enumerate_sets_of_lists(
    m: int, *, package_ids: Sequence[int] | None = None, cap: int = DEFAULT_ENUM_CAP
) -> Iterator[ListBundle]:
    """Every set of non-empty ordered lists partitioning the packages.

    Implemented as set-of-sets enumeration followed by within-block
    permutations.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    pids = tuple(package_ids) if package_ids is not None else tuple(range(1, m + 1))
    if len(pids) != m:
        raise ValueError("package_ids must have length m")
    total = count_sets_of_lists(m)
    if total > cap:
        raise CapExceeded(f"{total} bundles exceed the cap of {cap}")
    for blocks in _set_partitions(tuple(sorted(pids))):
        for ordered_blocks in product(*(permutations(b) for b in blocks)):
            yield ListBundle(lists=frozenset(ordered_blocks))
