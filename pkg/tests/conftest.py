import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bimod import DirectedGraph

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

FIXTURES = __file__.rsplit("/", 1)[0] + "/fixtures"


def random_graph(seed, n_min=3, n_max=50, weighted=None, density=0.25,
                 self_loops=False):
    """Small random directed graph; retries until at least one edge lands."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    while True:
        mask = rng.random((n, n)) < density
        if not self_loops:
            np.fill_diagonal(mask, False)
        if mask.any():
            break
    src, dst = np.nonzero(mask)
    if weighted is None:
        weighted = bool(rng.integers(0, 2))
    if weighted:
        weight = rng.uniform(0.2, 3.0, src.size)
    else:
        weight = None
    return DirectedGraph(n, src, dst, weight)


@pytest.fixture
def three_cycle():
    """Directed triangle 0 -> 1 -> 2 -> 0."""
    return DirectedGraph(3, [0, 1, 2], [1, 2, 0])


@pytest.fixture
def two_triangles():
    """Symmetric graph of two disjoint undirected triangles (arcs both ways)."""
    und = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    src = [a for a, b in und] + [b for a, b in und]
    dst = [b for a, b in und] + [a for a, b in und]
    return DirectedGraph(6, src, dst)


@pytest.fixture
def fixtures_dir():
    return FIXTURES
