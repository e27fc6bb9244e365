"""Hot loops: per-vertex girth and list-colouring backtracking.

Two interchangeable back ends live here.  The numba one is compiled on
first use; the numpy one uses different algorithms on purpose, so the two
can be checked against each other.  Setting ``GIRTHWRIGHT_NO_NUMBA=1``
(or not having numba installed) selects the numpy path.

Graphs are passed in CSR form (``indptr``, ``indices``).  Lists are int64
bit masks, so colours must lie in ``range(62)``.
"""

from __future__ import annotations

import os

import numpy as np

MAX_COLOUR = 62

FOUND, NONE, BUDGET = 1, 0, -1

_disabled = os.environ.get("GIRTHWRIGHT_NO_NUMBA", "").strip() not in ("", "0")

try:  # pragma: no cover - exercised implicitly
    if _disabled:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# numpy implementations (always importable, also used as cross-checks)
# --------------------------------------------------------------------------


def girths_numpy(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Shortest cycle through each vertex, 0 when there is none.

    A cycle through ``v`` is two neighbours of ``v`` joined by a path that
    avoids ``v``.  Distances in ``G - v`` come from repeated boolean matrix
    products, which is wasteful but easy to trust.
    """
    n = len(indptr) - 1
    adj = np.zeros((n, n), dtype=np.int64)
    for v in range(n):
        adj[v, indices[indptr[v]:indptr[v + 1]]] = 1
    out = np.zeros(n, dtype=np.int64)
    for v in range(n):
        nbrs = indices[indptr[v]:indptr[v + 1]]
        if len(nbrs) < 2:
            continue
        sub = adj.copy()
        sub[v, :] = 0
        sub[:, v] = 0
        dist = np.full((len(nbrs), n), -1, dtype=np.int64)
        frontier = np.zeros((len(nbrs), n), dtype=np.int64)
        frontier[np.arange(len(nbrs)), nbrs] = 1
        seen = frontier.copy()
        dist[frontier == 1] = 0
        step = 0
        while frontier.any():
            step += 1
            frontier = ((frontier @ sub) > 0).astype(np.int64) * (1 - seen)
            dist[frontier == 1] = step
            seen |= frontier
        pair = dist[:, nbrs]
        mask = (pair >= 0) & ~np.eye(len(nbrs), dtype=bool)
        if mask.any():
            out[v] = int(pair[mask].min()) + 2
    return out


def search_numpy(indptr, indices, lists, fixed, node_limit):
    """Backtracking colouring with a dynamic smallest-list-first order.

    ``fixed[v] >= 0`` pins a colour.  Returns ``(status, colours)`` where
    status is FOUND, NONE or BUDGET.
    """
    n = len(lists)
    adj = np.zeros((n, n), dtype=bool)
    for v in range(n):
        adj[v, indices[indptr[v]:indptr[v + 1]]] = True
    col = np.array(fixed, dtype=np.int64)
    bits = np.int64(1) << np.arange(MAX_COLOUR, dtype=np.int64)
    for v in range(n):
        if col[v] >= 0 and np.any(col[adj[v]] == col[v]):
            return NONE, col
    stack_v: list[int] = []
    stack_mask: list[int] = []
    nodes = 0

    def pick():
        free = np.flatnonzero(col < 0)
        if len(free) == 0:
            return -1, 0
        used = np.zeros(n, dtype=np.int64)
        coloured = col >= 0
        onehot = np.where(coloured, bits[np.maximum(col, 0)], 0)
        # OR of neighbour colours, one row per free vertex
        for v in free:
            used[v] = np.bitwise_or.reduce(onehot[adj[v]]) if adj[v].any() else 0
        avail = lists[free] & ~used[free]
        counts = np.array([bin(int(a)).count("1") for a in avail])
        j = int(np.argmin(counts))
        return int(free[j]), int(avail[j])

    while True:
        v, mask = pick()
        if v < 0:
            return FOUND, col
        if mask == 0:
            while stack_v:
                u = stack_v.pop()
                rest = stack_mask.pop()
                col[u] = -1
                if rest:
                    v, mask = u, rest
                    break
            else:
                return NONE, col
        low = mask & -mask
        col[v] = low.bit_length() - 1
        stack_v.append(v)
        stack_mask.append(mask & ~low)
        nodes += 1
        if node_limit > 0 and nodes > node_limit:
            return BUDGET, col


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _girths_jit(indptr, indices):
        # BFS from v labelling every vertex with the neighbour of v it hangs
        # under; an edge joining two different branches closes a cycle
        # through v of length d(x) + d(y) + 1.
        n = len(indptr) - 1
        out = np.zeros(n, dtype=np.int64)
        dist = np.empty(n, dtype=np.int64)
        branch = np.empty(n, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for v in range(n):
            for i in range(n):
                dist[i] = -1
                branch[i] = -1
            dist[v] = 0
            head = 0
            tail = 0
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                dist[w] = 1
                branch[w] = w
                queue[tail] = w
                tail += 1
            best = 1 << 40
            while head < tail:
                x = queue[head]
                head += 1
                if 2 * dist[x] >= best:
                    break
                for p in range(indptr[x], indptr[x + 1]):
                    y = indices[p]
                    if y == v:
                        continue
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        branch[y] = branch[x]
                        queue[tail] = y
                        tail += 1
                    elif branch[y] != branch[x]:
                        c = dist[x] + dist[y] + 1
                        if c < best:
                            best = c
            if best < (1 << 40):
                out[v] = best
        return out

    @njit(cache=True)
    def _popcount(x):
        c = 0
        while x:
            x &= x - 1
            c += 1
        return c

    @njit(cache=True)
    def _search_jit(indptr, indices, lists, fixed, node_limit):
        n = len(lists)
        col = fixed.copy()
        for v in range(n):
            if col[v] >= 0:
                for p in range(indptr[v], indptr[v + 1]):
                    if col[indices[p]] == col[v]:
                        return 0, col
        stack_v = np.empty(n, dtype=np.int64)
        stack_mask = np.empty(n, dtype=np.int64)
        depth = 0
        nodes = 0
        while True:
            best = -1
            best_count = 1 << 30
            best_mask = 0
            for v in range(n):
                if col[v] < 0:
                    avail = lists[v]
                    for p in range(indptr[v], indptr[v + 1]):
                        c = col[indices[p]]
                        if c >= 0:
                            avail &= ~(np.int64(1) << c)
                    k = _popcount(avail)
                    if k < best_count:
                        best = v
                        best_count = k
                        best_mask = avail
                        if k == 0:
                            break
            if best < 0:
                return 1, col
            v = best
            mask = best_mask
            if mask == 0:
                found = False
                while depth > 0:
                    depth -= 1
                    u = stack_v[depth]
                    col[u] = -1
                    if stack_mask[depth] != 0:
                        v = u
                        mask = stack_mask[depth]
                        found = True
                        break
                if not found:
                    return 0, col
            low = mask & -mask
            c = 0
            while (np.int64(1) << c) != low:
                c += 1
            col[v] = c
            stack_v[depth] = v
            stack_mask[depth] = mask & ~low
            depth += 1
            nodes += 1
            if node_limit > 0 and nodes > node_limit:
                return -1, col


def vertex_girths(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    if HAVE_NUMBA:
        return _girths_jit(indptr, indices)
    return girths_numpy(indptr, indices)


def search(indptr, indices, lists, fixed, node_limit: int = 0):
    if HAVE_NUMBA:
        status, col = _search_jit(indptr, indices, lists, fixed, np.int64(node_limit))
        return int(status), col
    return search_numpy(indptr, indices, lists, fixed, node_limit)
