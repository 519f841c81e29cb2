"""Undirected graphs on vertices 1..n with a fixed incidence orientation.

Edges are stored canonically as (i, j) with i < j, sorted lexicographically.
The incidence matrix orients every edge i -> j (row: -1 at i, +1 at j), so it
is reproducible byte for byte; rigidity ranks do not depend on orientation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InputError("vertex count n must be a positive integer")
        canon = []
        for e in self.edges:
            pair = tuple(int(v) for v in e)
            if len(pair) != 2:
                raise InputError(f"edge {e!r} is not a pair")
            i, j = pair
            if i == j:
                raise InputError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InputError(f"edge ({i},{j}) has an endpoint outside 1..{self.n}")
            canon.append((min(i, j), max(i, j)))
        if len(set(canon)) != len(canon):
            raise InputError("duplicate edges")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        adj = [[] for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_edge_set", frozenset(self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edge_set

    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map canonical edge -> row/column position in the canonical order."""
        return {e: idx for idx, e in enumerate(self.edges)}


def neighbors(g: Graph, i: int) -> set[int]:
    """Vertices adjacent to i (1-based)."""
    if not 1 <= i <= g.n:
        raise InputError(f"vertex {i} outside 1..{g.n}")
    return set(g._adj[i])


def is_connected(g: Graph) -> bool:
    """True iff one component spans all vertices (a single vertex counts)."""
    seen = {1}
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for v in g._adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.n


def incidence(g: Graph) -> np.ndarray:
    """(m, n) incidence matrix; row per canonical edge with -1 at i, +1 at j."""
    h = np.zeros((g.m, g.n))
    for row, (i, j) in enumerate(g.edges):
        h[row, i - 1] = -1.0
        h[row, j - 1] = 1.0
    return h


def spanning_tree(g: Graph) -> Graph:
    """BFS tree from vertex 1, visiting neighbors in ascending order."""
    if not is_connected(g):
        raise DomainError("spanning tree requires a connected graph")
    seen = {1}
    queue = deque([1])
    tree_edges = []
    while queue:
        u = queue.popleft()
        for v in g._adj[u]:
            if v not in seen:
                seen.add(v)
                tree_edges.append((min(u, v), max(u, v)))
                queue.append(v)
    return Graph(g.n, tuple(tree_edges))
