from fractions import Fraction

import pytest

import delivery_mech as dm
from delivery_mech import analysis, figures


@pytest.fixture(scope="session")
def fig2():
    return figures.figure_two()


@pytest.fixture(scope="session")
def fig3():
    return figures.figure_three()


@pytest.fixture(scope="session")
def fig4_left():
    return figures.figure_four_left()


@pytest.fixture(scope="session")
def fig4_right():
    return figures.figure_four_right()


@pytest.fixture(scope="session")
def small_corpus():
    """A couple dozen seeded instances for cross-solver checks."""
    return analysis.make_corpus(5000, 24)


def tiny_path_instance():
    g = dm.Graph(
        nodes=("v0", "v1", "v2"),
        edges=(("v0", "v1", Fraction(1)), ("v1", "v2", Fraction(1))),
    )
    return dm.Instance(
        graph=g,
        agents=(dm.AgentSpec(1, "v0", Fraction(1, 3)), dm.AgentSpec(2, "v1", Fraction(1, 4))),
        packages=(dm.PackageSpec(1, "v0", "v2"),),
    )
