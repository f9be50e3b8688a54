"""Random graph generation with reproducible, substream-keyed randomness.

Each graph is built by taking the complete graph K_n, deleting a uniformly
random number j of edges (j drawn from {0, ..., n(n-1)/2}, both endpoints
included), padding with isolated vertices up to the target order N, and
relabeling with a uniformly random vertex permutation. Orders n run from 2
to N, so a batch of k graphs per order holds k*(N-1) graphs in total.

Randomness is a hard contract: every graph is drawn from its own Philox
substream keyed by (seed, order, repetition, attempt) via numpy's
SeedSequence spawn keys. Philox is counter-based and platform-independent,
so batches are bitwise reproducible and independent of generation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, apply_permutation, pad_to_order


@dataclass(frozen=True)
class GenConfig:
    """Batch parameters: graphs of orders 2..max_order, per_order_count each."""

    max_order: int
    per_order_count: int
    seed: int

    def __post_init__(self):
        if self.max_order < 2:
            raise ValueError(f"max_order must be >= 2, got {self.max_order}")
        if self.per_order_count < 1:
            raise ValueError(f"per_order_count must be >= 1, got {self.per_order_count}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")

    @property
    def total(self) -> int:
        return self.per_order_count * (self.max_order - 1)


def stream_for(seed: int, order: int, repetition: int, attempt: int = 0) -> np.random.Generator:
    """Philox substream for one (seed, order, repetition, attempt) slot."""
    ss = np.random.SeedSequence(seed, spawn_key=(order, repetition, attempt))
    return np.random.Generator(np.random.Philox(ss))


def random_subgraph_of_complete(n: int, rng: np.random.Generator) -> Graph:
    """K_n with j edges deleted, j uniform on {0, ..., n(n-1)/2} inclusive.

    The edge list of K_n is shuffled and the first j edges are dropped, so
    both K_n itself (j=0) and the edgeless graph (j=m) are reachable.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    m = n * (n - 1) // 2
    j = int(rng.integers(0, m, endpoint=True))
    rows, cols = np.triu_indices(n, k=1)
    perm = rng.permutation(m)
    keep = perm[j:]
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[rows[keep], cols[keep]] = 1
    adj |= adj.T
    return Graph(adj)


def generate_embedded(n: int, max_order: int, rng: np.random.Generator) -> Graph:
    """Random order-n subgraph of K_n, embedded at a random position in order max_order."""
    if not 2 <= n <= max_order:
        raise ValueError(f"need 2 <= n <= {max_order}, got n={n}")
    g = random_subgraph_of_complete(n, rng)
    g = pad_to_order(g, max_order)
    sigma = rng.permutation(max_order)
    return apply_permutation(g, sigma)


def generate_batch(cfg: GenConfig) -> list[Graph]:
    """All cfg.total graphs, in (order ascending, repetition ascending) order.

    Pure function of cfg: per-slot substreams make the output independent of
    how the work is scheduled.
    """
    out = []
    for n in range(2, cfg.max_order + 1):
        for rep in range(cfg.per_order_count):
            rng = stream_for(cfg.seed, n, rep)
            out.append(generate_embedded(n, cfg.max_order, rng))
    return out
