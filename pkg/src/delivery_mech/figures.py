"""Bundled example instances with exactly known optima.

Each builder returns a small instance whose key quantities were designed to
land on round numbers, and the test suite pins those numbers exactly:

* figure_two: two agents (weights 2, 3), three packages.  The unrestricted
  optimum costs 46 = 2*17 + 3*4, the best non-collaborative solution costs
  47 = 2*16 + 3*5, and the best direct-delivery-with-return solution costs
  72 = 2*36, with the weight-2 agent delivering everything in the order
  (1, 2, 3) at travel distance 36.
* figure_three: three agents; the position-only forest solutions cost
  (x0, x-1, x-2, x-3) = (46, 46, 10, 160), so the best-of-forests mechanism
  picks x-2 and pays (40, 0, 156).
* figure_four_left: one package, three agents; collaborative optimum 37
  with per-agent energies (9, 12, 16), deleted-agent optima (40, 40, 45),
  payments (12, 15, 24) totalling 51; the lonely mechanism selects agent 3
  and pays 48.
* figure_four_right: one package, three agents; optimum 38 = 18 + 10 + 10,
  deleted-agent optima (40, 46, 38), payments (20, 18, 10) totalling 48;
  the lonely mechanism selects agent 2 and pays 50.

The left/right pair shows that neither single-package mechanism is always
cheaper than the other.
"""

from __future__ import annotations

from fractions import Fraction

from .model import (
    AgentSpec,
    Graph,
    Instance,
    PackageSpec,
    Solution,
    drop,
    move,
    pickup,
)

_H = Fraction(1, 2)


def figure_two() -> Instance:
    """Corridor with a nested same-direction package and a pendant package.

    Path u0 -- u1 -- u2 -- u3 -- u4 at coordinates 0, 9/2, 5, 7, 11; the
    expensive agent sits on a length-4 pendant x at u1 holding package 2,
    whose target y hangs half a unit below u2.  Packages 1 and 3 both run
    westward from u3, which is what makes direct-delivery-with-return (72)
    so much worse than free routing (46/47).
    """
    graph = Graph(
        nodes=("u0", "u1", "u2", "u3", "u4", "x", "y"),
        edges=(
            ("u0", "u1", Fraction(9, 2)),
            ("u1", "u2", _H),
            ("u2", "u3", Fraction(2)),
            ("u3", "u4", Fraction(4)),
            ("u1", "x", Fraction(4)),
            ("u2", "y", _H),
        ),
    )
    agents = (AgentSpec(1, "u4", Fraction(2)), AgentSpec(2, "x", Fraction(3)))
    packages = (
        PackageSpec(1, "u3", "u1"),
        PackageSpec(2, "x", "y"),
        PackageSpec(3, "u3", "u0"),
    )
    return Instance(graph=graph, agents=agents, packages=packages)


def figure_two_collaborative_solution() -> Solution:
    """A cost-46 solution of figure_two (the unrestricted optimum).

    Agent 2 brings package 2 down its pendant; agent 1 sweeps packages 1 and
    3 westward, detouring once to finish package 2.
    """
    return Solution.from_dict(
        {
            1: [
                move("u3"),
                pickup(1),
                move("u1"),
                drop(1),
                pickup(2),
                move("u2"),
                move("y"),
                drop(2),
                move("u2"),
                move("u3"),
                pickup(3),
                move("u0"),
                drop(3),
            ],
            2: [pickup(2), move("u1"), drop(2)],
        }
    )


def figure_three() -> Instance:
    """Chain sX -- tX -- (hub) -- sY -- tY with agents 1 and 3 near the two
    packages and a hugely expensive agent 2 sitting closest to both.

    The position-only forest assigns both packages to agent 2, so deleting
    agent 2 is what unlocks the cheap solution.
    """
    graph = Graph(
        nodes=("p1", "p2", "p3", "sX", "tX", "sY", "tY"),
        edges=(
            ("p1", "sX", Fraction(3, 4)),
            ("sX", "tX", Fraction(1, 4)),
            ("p2", "tX", Fraction(1, 4)),
            ("p2", "sY", Fraction(1)),
            ("sY", "tY", _H),
            ("p3", "tY", _H),
        ),
    )
    agents = (
        AgentSpec(1, "p1", Fraction(2)),
        AgentSpec(2, "p2", Fraction(40)),
        AgentSpec(3, "p3", Fraction(3)),
    )
    packages = (PackageSpec(1, "sX", "tX"), PackageSpec(2, "sY", "tY"))
    return Instance(graph=graph, agents=agents, packages=packages)


def figure_four_left() -> Instance:
    """One package over a length-4 path; the optimum chains all three agents.

    Handover points at 4/7 and 12/7; agent 1 hangs 4/35 off the source.
    """
    graph = Graph(
        nodes=("s", "a", "b", "t", "h1"),
        edges=(
            ("s", "a", Fraction(4, 7)),
            ("a", "b", Fraction(8, 7)),
            ("b", "t", Fraction(16, 7)),
            ("s", "h1", Fraction(4, 35)),
        ),
    )
    agents = (
        AgentSpec(1, "h1", Fraction(105, 8)),
        AgentSpec(2, "a", Fraction(21, 2)),
        AgentSpec(3, "b", Fraction(7)),
    )
    packages = (PackageSpec(1, "s", "t"),)
    return Instance(graph=graph, agents=agents, packages=packages)


def figure_four_right() -> Instance:
    """One package over a length-4 path split in thirds, agents on the path.

    Agents 2 and 3 have equal weights, so the optimum that uses all three
    agents ties with a two-agent one; deleting agent 3 costs nothing, which
    is what drags its payment down and makes the lonely mechanism pay more.
    """
    graph = Graph(
        nodes=("s", "a", "b", "t"),
        edges=(
            ("s", "a", Fraction(4, 3)),
            ("a", "b", Fraction(4, 3)),
            ("b", "t", Fraction(4, 3)),
        ),
    )
    agents = (
        AgentSpec(1, "s", Fraction(27, 2)),
        AgentSpec(2, "a", Fraction(15, 2)),
        AgentSpec(3, "b", Fraction(15, 2)),
    )
    packages = (PackageSpec(1, "s", "t"),)
    return Instance(graph=graph, agents=agents, packages=packages)


FIGURE_BUILDERS = {
    "fig2": figure_two,
    "fig3-scenario": figure_three,
    "fig4-left": figure_four_left,
    "fig4-right": figure_four_right,
}
