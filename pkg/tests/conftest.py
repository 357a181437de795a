import random

import pytest

from stabledg import DynamicGraph
from stabledg.adversary import BipartiteExpander, ExpanderParams


def build_graph(arrivals):
    """Apply (vertex, neighbors) arrivals in order and return the graph."""
    g = DynamicGraph()
    for v, nbrs in arrivals:
        g.apply_arrival(v, nbrs)
    return g


def petersen():
    # outer 5-cycle 0-4, inner pentagram 5-9, spokes i -- i+5
    return build_graph(
        [
            (0, []),
            (1, [0]),
            (2, [1]),
            (3, [2]),
            (4, [3, 0]),
            (5, [0]),
            (6, [1]),
            (7, [2, 5]),
            (8, [3, 6, 5]),
            (9, [4, 7, 6]),
        ]
    )


def gnp_graph(n, p, seed):
    rng = random.Random(seed)
    g = DynamicGraph()
    for v in range(n):
        nbrs = [u for u in range(v) if rng.random() < p]
        g.apply_arrival(v, nbrs)
    return g


@pytest.fixture
def tiny_expander_n3():
    # |L| = 4, |R| = 3; every left vertex has two right-neighbors
    edges = [(0, 4), (0, 5), (1, 5), (1, 6), (2, 4), (2, 6), (3, 4), (3, 5)]
    return BipartiteExpander(
        left=[0, 1, 2, 3],
        right=[4, 5, 6],
        edges=edges,
        params=ExpanderParams(n=3, epsilon=1 / 3, mu=0.005, delta=0.1, t_radius=0),
    )


@pytest.fixture
def tiny_expander_n4():
    # |L| = 5, |R| = 4
    edges = [(0, 5), (0, 6), (1, 6), (1, 7), (2, 7), (2, 8), (3, 8), (3, 5), (4, 5), (4, 6)]
    return BipartiteExpander(
        left=[0, 1, 2, 3, 4],
        right=[5, 6, 7, 8],
        edges=edges,
        params=ExpanderParams(n=4, epsilon=0.25, mu=0.005, delta=0.1, t_radius=0),
    )
