import numpy as np
import pytest

from chromagraph import (
    Graph,
    apply_permutation,
    complete_graph,
    edge_count,
    from_edges,
    pad_to_order,
)
from chromagraph.graphs import inverse_permutation

from conftest import random_graph


class TestGraphValidation:
    def test_rejects_asymmetric(self):
        adj = np.zeros((3, 3), dtype=np.uint8)
        adj[0, 1] = 1
        with pytest.raises(ValueError, match="symmetric"):
            Graph(adj)

    def test_rejects_self_loops(self):
        adj = np.eye(3, dtype=np.uint8)
        with pytest.raises(ValueError, match="diagonal"):
            Graph(adj)

    def test_rejects_non_binary(self):
        adj = np.full((2, 2), 2, dtype=np.uint8)
        np.fill_diagonal(adj, 0)
        with pytest.raises(ValueError, match="0 or 1"):
            Graph(adj)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Graph(np.zeros((0, 0), dtype=np.uint8))

    def test_immutable(self):
        g = complete_graph(3)
        with pytest.raises(ValueError):
            g.adj[0, 1] = 0


class TestCompleteGraph:
    def test_single_vertex_has_no_edges(self):
        assert edge_count(complete_graph(1)) == 0

    def test_k4_has_six_edges(self):
        assert edge_count(complete_graph(4)) == 6

    def test_k50_has_1225_edges(self):
        assert edge_count(complete_graph(50)) == 1225

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            complete_graph(0)


class TestEdgeCount:
    def test_triangle(self):
        assert edge_count(complete_graph(3)) == 3

    def test_edgeless(self):
        assert edge_count(Graph(np.zeros((10, 10), dtype=np.uint8))) == 0

    def test_five_cycle(self, five_cycle):
        assert edge_count(five_cycle) == 5


class TestApplyPermutation:
    def test_identity(self, petersen):
        assert apply_permutation(petersen, np.arange(10)) == petersen

    def test_complete_graph_invariant(self):
        k6 = complete_graph(6)
        rng = np.random.default_rng(3)
        assert apply_permutation(k6, rng.permutation(6)) == k6

    def test_swap_relabels_edge(self):
        # edge {0, 2} on 3 vertices; swapping 0 and 1 moves it to {1, 2}
        g = from_edges(3, [(0, 2)])
        swapped = apply_permutation(g, np.array([1, 0, 2]))
        assert swapped == from_edges(3, [(1, 2)])

    def test_rejects_size_mismatch(self, five_cycle):
        with pytest.raises(ValueError):
            apply_permutation(five_cycle, np.arange(4))

    def test_rejects_non_bijection(self, five_cycle):
        with pytest.raises(ValueError, match="bijection"):
            apply_permutation(five_cycle, np.array([0, 0, 1, 2, 3]))

    def test_preserves_edge_count(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            n = int(rng.integers(2, 30))
            g = random_graph(n, rng.random(), rng)
            perm = rng.permutation(n)
            assert edge_count(apply_permutation(g, perm)) == edge_count(g)

    def test_inverse_round_trips(self):
        rng = np.random.default_rng(12)
        for _ in range(25):
            n = int(rng.integers(2, 30))
            g = random_graph(n, rng.random(), rng)
            perm = rng.permutation(n)
            assert apply_permutation(apply_permutation(g, perm), inverse_permutation(perm)) == g

    def test_composition(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            n = int(rng.integers(2, 20))
            g = random_graph(n, rng.random(), rng)
            p = rng.permutation(n)
            q = rng.permutation(n)
            assert apply_permutation(apply_permutation(g, p), q) == apply_permutation(g, q[p])


class TestPadToOrder:
    def test_pad_k3_to_5(self):
        padded = pad_to_order(complete_graph(3), 5)
        assert padded.order == 5
        assert edge_count(padded) == 3
        assert padded.degrees()[3] == 0 and padded.degrees()[4] == 0

    def test_pad_to_same_order_is_identity(self, petersen):
        assert pad_to_order(petersen, 10) == petersen

    def test_pad_edgeless(self):
        g = Graph(np.zeros((2, 2), dtype=np.uint8))
        padded = pad_to_order(g, 50)
        assert padded.order == 50 and edge_count(padded) == 0

    def test_rejects_shrink(self, petersen):
        with pytest.raises(ValueError):
            pad_to_order(petersen, 9)

    def test_preserves_edge_count(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            n = int(rng.integers(1, 20))
            g = random_graph(n, rng.random(), rng) if n > 1 else Graph(np.zeros((1, 1), np.uint8))
            assert edge_count(pad_to_order(g, n + int(rng.integers(0, 10)))) == edge_count(g)


class TestNeighborMasks:
    def test_matches_adjacency(self, petersen):
        masks = petersen.neighbor_masks()
        for i in range(10):
            for j in range(10):
                assert ((int(masks[i]) >> j) & 1) == petersen.adj[i, j]
