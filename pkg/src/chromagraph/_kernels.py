"""Numba kernels for the exact solvers. Graphs live in uint64 adjacency
bitmasks, so everything here is limited to order <= 64."""

from __future__ import annotations

import numpy as np
from numba import int64, njit, uint64

U1 = uint64(1)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> uint64(1)) & uint64(0x5555555555555555))
    x = (x & uint64(0x3333333333333333)) + ((x >> uint64(2)) & uint64(0x3333333333333333))
    x = (x + (x >> uint64(4))) & uint64(0x0F0F0F0F0F0F0F0F)
    return (x * uint64(0x0101010101010101)) >> uint64(56)


@njit(cache=True, inline="always")
def _ctz(x):
    # index of lowest set bit; x must be nonzero
    return int64(_popcount((x & (uint64(0) - x)) - U1))


@njit(cache=True)
def degeneracy_order(nbr, n):
    """Vertices in degeneracy order (repeatedly remove a min-degree vertex)."""
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = _popcount(nbr[v])
    removed = np.zeros(n, dtype=np.uint8)
    order = np.empty(n, dtype=np.int64)
    for k in range(n):
        best = -1
        best_deg = n + 1
        for v in range(n):
            if not removed[v] and deg[v] < best_deg:
                best = v
                best_deg = deg[v]
        removed[best] = 1
        order[k] = best
        m = nbr[best]
        while m:
            u = _ctz(m)
            m &= m - U1
            if not removed[u]:
                deg[u] -= 1
    return order


@njit(cache=True, inline="always")
def _pick_pivot(nbr, P, X):
    # Tomita pivot: vertex of P|X with the most neighbors inside P
    m = P | X
    best_u = 0
    best_c = -1
    while m:
        u = _ctz(m)
        m &= m - U1
        c = int64(_popcount(P & nbr[u]))
        if c > best_c:
            best_c = c
            best_u = u
    return best_u


@njit(cache=True)
def max_clique_kernel(nbr, n, order):
    """Maximum clique via Bron-Kerbosch with pivoting.

    The outer loop walks the degeneracy order; inner recursion is unrolled
    onto explicit per-level P/X/candidate stacks. Subtrees that cannot beat
    the incumbent (|R| + |P| <= best) are pruned, which keeps the search
    exact for the maximum while skipping most maximal cliques.
    """
    best_size = 0
    best = np.zeros(n, dtype=np.int64)
    cur = np.zeros(n + 1, dtype=np.int64)
    P = np.zeros(n + 2, dtype=np.uint64)
    X = np.zeros(n + 2, dtype=np.uint64)
    cand = np.zeros(n + 2, dtype=np.uint64)
    earlier = uint64(0)
    for oi in range(n):
        v = order[oi]
        vb = U1 << uint64(v)
        p0 = nbr[v] & ~earlier
        x0 = nbr[v] & earlier
        earlier |= vb
        if p0 == 0 and x0 == 0:
            if best_size < 1:
                best_size = 1
                best[0] = v
            continue
        if 1 + int64(_popcount(p0)) <= best_size:
            continue
        cur[0] = v
        lvl = 1
        P[1] = p0
        X[1] = x0
        pu = _pick_pivot(nbr, p0, x0)
        cand[1] = p0 & ~nbr[pu]
        while lvl >= 1:
            if cand[lvl] == 0 or lvl + int64(_popcount(P[lvl])) <= best_size:
                lvl -= 1
                continue
            w = _ctz(cand[lvl])
            wb = U1 << uint64(w)
            cand[lvl] &= ~wb
            child_p = P[lvl] & nbr[w]
            child_x = X[lvl] & nbr[w]
            P[lvl] &= ~wb
            X[lvl] |= wb
            cur[lvl] = w
            if child_p == 0 and child_x == 0:
                if lvl + 1 > best_size:
                    best_size = lvl + 1
                    for i in range(best_size):
                        best[i] = cur[i]
                continue
            if child_p == 0 or lvl + 1 + int64(_popcount(child_p)) <= best_size:
                continue
            lvl += 1
            P[lvl] = child_p
            X[lvl] = child_x
            pu = _pick_pivot(nbr, child_p, child_x)
            cand[lvl] = child_p & ~nbr[pu]
    return best_size, best[:best_size]


@njit(cache=True)
def greedy_dsatur_kernel(nbr, n):
    """Greedy DSATUR coloring: colors 0..k-1, returned with the count k.

    Vertex choice: maximum saturation, ties broken by higher degree, then
    lower index. Always a proper coloring; used as the search upper bound.
    """
    colors = np.full(n, -1, dtype=np.int8)
    sat = np.zeros(n, dtype=np.uint64)
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = _popcount(nbr[v])
    num_colors = 0
    for _ in range(n):
        best_v = -1
        best_sat = -1
        best_deg = -1
        for v in range(n):
            if colors[v] >= 0:
                continue
            s = int64(_popcount(sat[v]))
            if s > best_sat or (s == best_sat and deg[v] > best_deg):
                best_v = v
                best_sat = s
                best_deg = deg[v]
        c = 0
        while (sat[best_v] >> uint64(c)) & U1:
            c += 1
        colors[best_v] = c
        if c + 1 > num_colors:
            num_colors = c + 1
        m = nbr[best_v]
        while m:
            u = _ctz(m)
            m &= m - U1
            sat[u] |= U1 << uint64(c)
    return colors, num_colors


@njit(cache=True)
def chromatic_kernel(nbr, n, clique, ub_assign, ub, node_budget):
    """Exact chromatic number by DSATUR branch and bound.

    The clique is pre-colored with distinct colors (lower bound plus symmetry
    breaking); branching tries each feasible already-used color and at most
    one fresh color. Per-level snapshots of the saturation masks make undo a
    plain copy: whenever control returns to a level, its last assignment (if
    still applied) is rolled back before the next candidate, so backtracking
    is a bare pop. Returns (count, assignment, nodes, status) with status 1
    when the node budget ran out (count is then only an upper bound).
    """
    lb = len(clique)
    best = ub
    best_assign = ub_assign.copy()
    nodes = 0
    if best <= lb:
        return best, best_assign, nodes, 0

    colors = np.full(n, -1, dtype=np.int8)
    sat = np.zeros(n, dtype=np.uint64)
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = _popcount(nbr[v])
    uncolored = uint64(0)
    for v in range(n):
        uncolored |= U1 << uint64(v)

    for i in range(lb):
        v = clique[i]
        colors[v] = i
        uncolored &= ~(U1 << uint64(v))
        m = nbr[v]
        while m:
            u = _ctz(m)
            m &= m - U1
            sat[u] |= U1 << uint64(i)

    max_depth = n - lb
    stk_v = np.full(max_depth + 1, -1, dtype=np.int64)
    stk_c = np.full(max_depth + 1, -1, dtype=np.int64)
    stk_numcol = np.zeros(max_depth + 1, dtype=np.int64)
    stk_sat = np.zeros((max_depth + 1, n), dtype=np.uint64)

    num_colors = lb
    depth = 0
    best_v = -1
    best_sat = -1
    best_deg = -1
    for v in range(n):
        if colors[v] >= 0:
            continue
        s = int64(_popcount(sat[v]))
        if s > best_sat or (s == best_sat and deg[v] > best_deg):
            best_v = v
            best_sat = s
            best_deg = deg[v]
    stk_v[0] = best_v
    stk_c[0] = -1
    stk_numcol[0] = num_colors
    for i in range(n):
        stk_sat[0, i] = sat[i]

    while depth >= 0:
        v = stk_v[depth]
        node_numcol = stk_numcol[depth]
        if stk_c[depth] >= 0:
            # roll back this level's previous try (idempotent: the fields
            # may already hold their node-entry values)
            colors[v] = -1
            uncolored |= U1 << uint64(v)
            num_colors = node_numcol
            for i in range(n):
                sat[i] = stk_sat[depth, i]
        # next untried feasible color: used colors first, then one fresh one
        cand = -1
        if node_numcol < best:
            c = stk_c[depth] + 1
            while c < node_numcol:
                if not (stk_sat[depth, v] >> uint64(c)) & U1:
                    cand = c
                    break
                c += 1
            if cand == -1 and stk_c[depth] < node_numcol and node_numcol + 1 < best:
                cand = node_numcol
        if cand == -1:
            depth -= 1
            continue
        stk_c[depth] = cand
        colors[v] = cand
        uncolored &= ~(U1 << uint64(v))
        if cand == num_colors:
            num_colors += 1
        m = nbr[v]
        while m:
            u = _ctz(m)
            m &= m - U1
            sat[u] |= U1 << uint64(cand)
        nodes += 1
        if nodes >= node_budget:
            return best, best_assign, nodes, 1
        if uncolored == 0:
            if num_colors < best:
                best = num_colors
                for i in range(n):
                    best_assign[i] = colors[i]
                if best == lb:
                    return best, best_assign, nodes, 0
            continue
        if num_colors >= best:
            continue
        depth += 1
        best_v = -1
        best_sat = -1
        best_deg = -1
        for u in range(n):
            if colors[u] >= 0:
                continue
            s = int64(_popcount(sat[u]))
            if s > best_sat or (s == best_sat and deg[u] > best_deg):
                best_v = u
                best_sat = s
                best_deg = deg[u]
        stk_v[depth] = best_v
        stk_c[depth] = -1
        stk_numcol[depth] = num_colors
        for i in range(n):
            stk_sat[depth, i] = sat[i]

    return best, best_assign, nodes, 0
