"""Exact integral maximum flow.

Networks whose capacities fit in 32 bits go to SciPy's compiled solver; larger
ones fall back to the pure-Python Dinic implementation below.
"""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_array
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

INT32_MAX = 2**31 - 1


class FlowNetwork:
    """Residual graph in flat edge arrays; edge ``e ^ 1`` is the reverse of ``e``."""

    def __init__(self, n_nodes: int):
        self.n = n_nodes
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n_nodes)]
        self._side: set[int] | None = None

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        if capacity < 0:
            raise ValueError("capacities must be nonnegative")
        e = len(self.head)
        self.head += [v, u]
        self.cap += [capacity, 0]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        head, cap, adj = self.head, self.cap, self.adj
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                v = head[e]
                if cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _blocking_flow(self, s: int, t: int, level: list[int]) -> int:
        head, cap, adj = self.head, self.cap, self.adj
        it = [0] * self.n
        total = 0
        while True:
            # Iterative DFS for one augmenting path in the level graph.
            path: list[int] = []
            u = s
            while u != t:
                edges = adj[u]
                i = it[u]
                while i < len(edges):
                    e = edges[i]
                    v = head[e]
                    if cap[e] > 0 and level[v] == level[u] + 1:
                        break
                    i += 1
                it[u] = i
                if i == len(edges):
                    if u == s:
                        return total
                    level[u] = -1
                    e = path.pop()
                    u = head[e ^ 1]
                    it[u] += 1
                    continue
                path.append(edges[i])
                u = head[edges[i]]
            pushed = min(cap[e] for e in path)
            for e in path:
                cap[e] -= pushed
                cap[e ^ 1] += pushed
            total += pushed

    def max_flow(self, s: int, t: int, backend: str = "auto") -> int:
        """Maximum ``s``-``t`` flow value; ``backend`` is ``auto``, ``scipy`` or ``dinic``."""
        if backend not in ("auto", "scipy", "dinic"):
            raise ValueError(f"unknown backend {backend!r}")
        self._side = None
        if backend != "dinic" and s != t:
            C = self._capacity_matrix()
            # The flow value is bounded by the capacity leaving s.
            fits = C.nnz == 0 or (C.data.max() <= INT32_MAX and C[[s], :].sum() <= INT32_MAX)
            if fits:
                return self._max_flow_scipy(C.astype(np.int32), s, t)
            if backend == "scipy":
                raise ValueError("capacities too large for the 32-bit solver")
        return self._max_flow_dinic(s, t)

    def _capacity_matrix(self) -> csr_array:
        tails = np.array(self.head[1::2], dtype=np.int64)
        heads = np.array(self.head[0::2], dtype=np.int64)
        caps = np.array(self.cap[0::2], dtype=np.int64)
        C = csr_array((caps, (tails, heads)), shape=(self.n, self.n))
        C.sum_duplicates()  # parallel arcs merge into one of summed capacity
        return C

    def _max_flow_scipy(self, C: csr_array, s: int, t: int) -> int:
        result = maximum_flow(C, s, t)
        # Residual capacity C - F over the union pattern; F is skew-symmetric.
        R = (C.astype(np.int64) - result.flow.astype(np.int64)).tocsr()
        R.data = (R.data > 0).astype(np.int8)
        R.eliminate_zeros()
        reached = breadth_first_order(R, s, directed=True, return_predecessors=False)
        self._side = {int(v) for v in reached}
        return int(result.flow_value)

    def _max_flow_dinic(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            flow += self._blocking_flow(s, t, level)

    def source_side(self, s: int) -> set[int]:
        """Nodes reachable from ``s`` in the residual graph (call after :meth:`max_flow`)."""
        if self._side is not None:
            return set(self._side)
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.head[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen
