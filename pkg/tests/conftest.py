import pytest

from qmst import WeightedGraph, generate_random_graph
from qmst.experiment import prepare_problem

# Three vertices, unique cheapest tree {0-1, 1-2} with cost 3.
TRIANGLE = WeightedGraph(3, 0, ((0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)))


@pytest.fixture(scope="session")
def triangle():
    return TRIANGLE


@pytest.fixture(scope="session")
def triangle_problem():
    return prepare_problem(TRIANGLE)


@pytest.fixture(scope="session")
def calm_k4_problem():
    # Complete 4-vertex graph with small weights; feedback stays gentle
    # (largest per-layer kick well under a radian), so descent holds layer
    # by layer for every protocol variant.
    return prepare_problem(generate_random_graph(4, 1.0, 0.2, 0.5, 0))
