"""Dense undirected graphs on a fixed vertex budget.

A graph is its adjacency matrix: an ``order x order`` symmetric 0/1 matrix
with a zero diagonal. Vertices are 0-indexed. Matrices are dense on purpose:
every graph here is small (tens of vertices) and the downstream models
consume the raw matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected graph stored as a dense adjacency matrix."""

    adj: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adj, dtype=np.uint8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {adj.shape}")
        if adj.shape[0] < 1:
            raise ValueError("graph order must be >= 1")
        if not np.isin(adj, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diagonal(adj) != 0):
            raise ValueError("adjacency matrix must have a zero diagonal (no self-loops)")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be symmetric")
        adj.flags.writeable = False
        object.__setattr__(self, "adj", adj)

    @property
    def order(self) -> int:
        """Number of vertices."""
        return self.adj.shape[0]

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    def neighbor_masks(self) -> np.ndarray:
        """Rows of the adjacency matrix packed into uint64 bitmasks.

        Bit j of entry i is set iff vertices i and j are adjacent. Only valid
        for order <= 64.
        """
        n = self.order
        if n > 64:
            raise ValueError(f"bitmask representation requires order <= 64, got {n}")
        packed = np.packbits(self.adj, axis=1, bitorder="little")
        padded = np.zeros((n, 8), dtype=np.uint8)
        padded[:, : packed.shape[1]] = packed
        return padded.view(np.uint64).ravel()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adj.shape == other.adj.shape and np.array_equal(self.adj, other.adj)

    def __repr__(self):
        return f"Graph(order={self.order}, edges={edge_count(self)})"


def from_edges(order: int, edges) -> Graph:
    """Build a graph from an iterable of (i, j) vertex pairs."""
    adj = np.zeros((order, order), dtype=np.uint8)
    for i, j in edges:
        if i == j:
            raise ValueError(f"self-loop ({i}, {j}) not allowed")
        adj[i, j] = adj[j, i] = 1
    return Graph(adj)


def complete_graph(n: int) -> Graph:
    """The complete graph K_n: all n(n-1)/2 edges present."""
    if n < 1:
        raise ValueError(f"complete graph needs n >= 1, got {n}")
    adj = np.ones((n, n), dtype=np.uint8)
    np.fill_diagonal(adj, 0)
    return Graph(adj)


def edge_count(g: Graph) -> int:
    """Number of edges |E|."""
    return int(g.adj.sum()) // 2


def apply_permutation(g: Graph, perm: np.ndarray) -> Graph:
    """Relabel vertices: edge (i, j) becomes (perm[i], perm[j]).

    ``perm`` must be a bijection on range(g.order), given as an integer array
    where perm[i] is the new label of vertex i.
    """
    perm = np.asarray(perm)
    n = g.order
    if perm.shape != (n,):
        raise ValueError(f"permutation acts on {perm.shape[0] if perm.ndim == 1 else '?'} vertices, graph has {n}")
    if not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError("permutation must be a bijection on range(order)")
    new_adj = np.zeros_like(g.adj)
    new_adj[np.ix_(perm, perm)] = g.adj
    return Graph(new_adj)


def inverse_permutation(perm: np.ndarray) -> np.ndarray:
    perm = np.asarray(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv


def pad_to_order(g: Graph, target: int) -> Graph:
    """Append isolated vertices until the graph has ``target`` vertices."""
    n = g.order
    if target < n:
        raise ValueError(f"cannot pad order-{n} graph down to order {target}")
    if target == n:
        return g
    adj = np.zeros((target, target), dtype=np.uint8)
    adj[:n, :n] = g.adj
    return Graph(adj)
