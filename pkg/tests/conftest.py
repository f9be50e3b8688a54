import numpy as np
import pytest

from chromagraph import Graph, from_edges

PETERSEN_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),      # outer cycle
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),      # spokes
    (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),      # inner pentagram
]


@pytest.fixture
def petersen() -> Graph:
    return from_edges(10, PETERSEN_EDGES)


@pytest.fixture
def five_cycle() -> Graph:
    return from_edges(5, [(i, (i + 1) % 5) for i in range(5)])


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    adj = (rng.random((n, n)) < p).astype(np.uint8)
    adj = np.triu(adj, k=1)
    adj |= adj.T
    return Graph(adj)
