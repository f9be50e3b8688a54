"""Exact clique number and chromatic number.

``max_clique`` runs Bron-Kerbosch with Tomita pivoting over a degeneracy
ordering; ``chromatic_number`` runs a DSATUR-ordered branch and bound seeded
with the maximum clique (pre-colored with distinct colors, which is both the
lower bound and the symmetry break). Both are exact; the coloring search
carries an explicit node budget and raises instead of ever returning an
unproven value.

``brute_force_clique`` and ``brute_force_chromatic`` are deliberately naive
reference solvers for small graphs, kept independent of the search code so
tests can cross-check the two routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graphs import Graph

# ~60x the largest node count observed on order-50 instances; a graph that
# exceeds this is treated as a labeling failure, never approximated.
DEFAULT_NODE_BUDGET = 50_000_000

BRUTE_CLIQUE_MAX_ORDER = 16
BRUTE_CHROMATIC_MAX_ORDER = 10


class SolverBudgetError(RuntimeError):
    """The branch-and-bound node budget ran out before optimality was proven."""

    def __init__(self, nodes: int, budget: int):
        super().__init__(f"coloring search exhausted its node budget ({nodes} >= {budget})")
        self.nodes = nodes
        self.budget = budget


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class ColoringResult:
    chromatic: int
    assignment: np.ndarray  # colors 1..chromatic, one per vertex


def max_clique(g: Graph) -> CliqueResult:
    """A maximum clique of g: its size and one witness vertex set."""
    nbr = g.neighbor_masks()
    order = _kernels.degeneracy_order(nbr, g.order)
    size, witness = _kernels.max_clique_kernel(nbr, g.order, order)
    return CliqueResult(size=int(size), witness=tuple(sorted(int(v) for v in witness)))


def chromatic_number(
    g: Graph,
    clique: CliqueResult | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ColoringResult:
    """The chromatic number of g with a witness proper coloring.

    ``clique`` may pass in a precomputed maximum clique to seed the search;
    otherwise one is computed here. Raises SolverBudgetError if the search
    exceeds ``node_budget`` branch nodes.
    """
    if clique is None:
        clique = max_clique(g)
    nbr = g.neighbor_masks()
    n = g.order
    ub_assign, ub = _kernels.greedy_dsatur_kernel(nbr, n)
    count, assign, nodes, status = _kernels.chromatic_kernel(
        nbr, n, np.asarray(clique.witness, dtype=np.int64), ub_assign, ub, node_budget
    )
    if status != 0:
        raise SolverBudgetError(int(nodes), node_budget)
    return ColoringResult(chromatic=int(count), assignment=assign.astype(np.int64) + 1)


def label_graph(g: Graph, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, int]:
    """(chromatic number, clique number) of g, the clique feeding the coloring."""
    clique = max_clique(g)
    coloring = chromatic_number(g, clique=clique, node_budget=node_budget)
    return coloring.chromatic, clique.size


def brute_force_clique(g: Graph) -> int:
    """Maximum clique size by enumerating every vertex subset. Order <= 16."""
    n = g.order
    if n > BRUTE_CLIQUE_MAX_ORDER:
        raise ValueError(f"brute-force clique is capped at order {BRUTE_CLIQUE_MAX_ORDER}, got {n}")
    nbr = [int(m) for m in g.neighbor_masks()]
    best = 0
    for s in range(1, 1 << n):
        size = s.bit_count()
        if size <= best:
            continue
        m = s
        ok = True
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            if s & ~(nbr[v] | (1 << v)):
                ok = False
                break
        if ok:
            best = size
    return best


def brute_force_chromatic(g: Graph) -> int:
    """Smallest c admitting a proper c-coloring, by exhaustive assignment.

    Vertices are colored in index order; the only shortcut is fixing the
    first vertex's color (plain symmetry breaking). Order <= 10.
    """
    n = g.order
    if n > BRUTE_CHROMATIC_MAX_ORDER:
        raise ValueError(f"brute-force coloring is capped at order {BRUTE_CHROMATIC_MAX_ORDER}, got {n}")
    adj = g.adj
    colors = [0] * n

    def colorable(i: int, c: int) -> bool:
        if i == n:
            return True
        for col in range(1 if i == 0 else c):
            if all(not (adj[i, j] and colors[j] == col) for j in range(i)):
                colors[i] = col
                if colorable(i + 1, c):
                    return True
        return False

    for c in range(1, n + 1):
        if colorable(0, c):
            return c
    return n  # unreachable: n colors always suffice
