"""Frameworks (graph + coordinates) and the rigidity machinery on them.

Constraints are triples (i, j, k) with apex i and legs j <= k. A triple with
j == k encodes the squared length of edge {i, j}; j < k encodes the inner
product of the displacements from i to j and from i to k. Edge vectors follow
e_ij = p_i - p_j throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConfigurationError,
    DomainError,
    InputError,
    UnsupportedRegimeError,
)
from .graphs import Graph, is_connected
from .linalg import numerical_rank


@dataclass(frozen=True, eq=False)
class Configuration:
    """Points p_1..p_n as an immutable (n, d) float array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError("points must be a nonempty (n, d) array")
        if not np.all(np.isfinite(pts)):
            raise InputError("points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def stacked(self) -> np.ndarray:
        """Coordinates as one vector (p_1^T, ..., p_n^T)^T of length n*d."""
        return self.points.reshape(-1).copy()

    @classmethod
    def from_stacked(cls, vec, d: int) -> "Configuration":
        vec = np.asarray(vec, dtype=float)
        if d < 1 or vec.ndim != 1 or vec.size % d != 0:
            raise InputError("stacked vector length must be a multiple of d")
        return cls(vec.reshape(-1, d))


@dataclass(frozen=True, eq=False)
class Framework:
    graph: Graph
    config: Configuration

    def __post_init__(self):
        if self.graph.n != self.config.n:
            raise InputError(
                f"graph has {self.graph.n} vertices but configuration has {self.config.n}"
            )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def points(self) -> np.ndarray:
        return self.config.points


def distance_triple(i: int, j: int) -> tuple[int, int, int]:
    """Canonical distance constraint of edge {i, j}: apex is the larger label."""
    return (max(i, j), min(i, j), min(i, j))


@dataclass(frozen=True)
class TripleSet:
    """Ordered constraint triples; order fixes the component order of the
    constraint function and the rows of the weak rigidity matrix."""

    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        canon = []
        seen = set()
        for t in self.triples:
            trip = tuple(int(v) for v in t)
            if len(trip) != 3:
                raise InputError(f"triple {t!r} is not an (i, j, k) triple")
            i, j, k = trip
            if j > k:
                raise InputError(f"triple ({i},{j},{k}) must have legs ordered j <= k")
            if i == j or i == k:
                raise InputError(f"triple ({i},{j},{k}) apex equals a leg")
            key = ("d", min(i, j), max(i, j)) if j == k else ("a", i, j, k)
            if key in seen:
                raise InputError(f"duplicate constraint ({i},{j},{k})")
            seen.add(key)
            canon.append(trip)
        object.__setattr__(self, "triples", tuple(canon))
        if canon:
            arr = np.array(canon, dtype=int) - 1
            idx = (arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())
        else:
            z = np.zeros(0, dtype=int)
            idx = (z, z.copy(), z.copy())
        object.__setattr__(self, "_idx", idx)

    @property
    def s(self) -> int:
        return len(self.triples)

    def index_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """0-based (apex, leg1, leg2) arrays, one entry per triple."""
        ap, l1, l2 = self._idx
        return ap.copy(), l1.copy(), l2.copy()

    def require_valid_for(self, graph: Graph) -> None:
        for i, j, k in self.triples:
            if not graph.has_edge(i, j) or not graph.has_edge(i, k):
                raise InputError(f"triple ({i},{j},{k}) references a non-edge")


def required_rank(n: int, d: int) -> int:
    """Rank certifying that all first-order motions are rigid-body motions."""
    return n * d - d * (d + 1) // 2


def rigidity_function(f: Framework) -> np.ndarray:
    """Squared edge lengths in canonical edge order."""
    p = f.points
    return np.array([float((p[i - 1] - p[j - 1]) @ (p[i - 1] - p[j - 1]))
                     for i, j in f.graph.edges])


def rigidity_matrix(f: Framework) -> np.ndarray:
    """(m, n*d) Jacobian of the squared edge lengths with respect to p."""
    n, d = f.n, f.d
    p = f.points
    r = np.zeros((f.graph.m, n * d))
    for row, (i, j) in enumerate(f.graph.edges):
        e = p[i - 1] - p[j - 1]
        r[row, (i - 1) * d:i * d] = 2.0 * e
        r[row, (j - 1) * d:j * d] = -2.0 * e
    return r


def weak_rigidity_function(f: Framework, t: TripleSet) -> np.ndarray:
    """Components e_ij^T e_ik in triple order; equals squared length when j == k."""
    t.require_valid_for(f.graph)
    ap, l1, l2 = t._idx
    p = f.points
    return np.einsum("ij,ij->i", p[ap] - p[l1], p[ap] - p[l2])


def weak_rigidity_matrix(f: Framework, t: TripleSet) -> np.ndarray:
    """(s, n*d) Jacobian of the triple constraints with respect to p.

    Row of (i, j, k): (e_ij + e_ik)^T in apex block, -e_ik^T at j, -e_ij^T at
    k; for j == k the leg contributions accumulate to -2 e_ij^T.
    """
    t.require_valid_for(f.graph)
    ap, l1, l2 = t._idx
    p = f.points
    e1 = p[ap] - p[l1]
    e2 = p[ap] - p[l2]
    rows = np.arange(t.s)
    m = np.zeros((t.s, f.n, f.d))
    np.add.at(m, (rows, ap), e1 + e2)
    np.add.at(m, (rows, l1), -e2)
    np.add.at(m, (rows, l2), -e1)
    return m.reshape(t.s, f.n * f.d)


def require_spanning_tree(tree: Graph, graph: Graph) -> None:
    if tree.n != graph.n:
        raise DomainError("tree and graph must share the vertex set")
    if tree.m != graph.n - 1 or not is_connected(tree):
        raise DomainError("not a spanning tree: need n-1 edges forming one component")
    for e in tree.edges:
        if e not in graph._edge_set:
            raise DomainError(f"tree edge {e} is not an edge of the graph")


def restrict_triples_to_tree(tree: Graph, t: TripleSet) -> TripleSet:
    """Keep triples whose two defining edges both lie in the tree."""
    kept = [trip for trip in t.triples
            if tree.has_edge(trip[0], trip[1]) and tree.has_edge(trip[0], trip[2])]
    return TripleSet(tuple(kept))


def edge_weak_rigidity_matrix(f: Framework, tree: Graph, t: TripleSet) -> np.ndarray:
    """Jacobian of the tree-restricted constraints with respect to the stacked
    tree-edge vectors (the chain-rule factor through the tree incidence).

    Tree-edge vectors follow the incidence orientation, so the column vector of
    edge (a, b) with a < b is p_b - p_a and the identity
    ``edge_matrix @ kron(H_tree, I_d) == weak_rigidity_matrix`` holds row-wise
    on the restricted triple set.
    """
    t.require_valid_for(f.graph)
    require_spanning_tree(tree, f.graph)
    kept = restrict_triples_to_tree(tree, t)
    col_of = tree.edge_index()
    d = f.d
    p = f.points
    r = np.zeros((kept.s, tree.m * d))

    def accumulate(row, a, b, vec):
        col = col_of[(min(a, b), max(a, b))]
        sign = 1.0 if a > b else -1.0
        r[row, col * d:(col + 1) * d] += sign * vec

    for row, (i, j, k) in enumerate(kept.triples):
        eij = p[i - 1] - p[j - 1]
        eik = p[i - 1] - p[k - 1]
        accumulate(row, i, j, eik)
        accumulate(row, i, k, eij)
    return r


def trivial_motion_basis(c: Configuration) -> np.ndarray:
    """Orthonormal (n*d, d(d+1)/2) basis of rigid-body velocity fields.

    d translation columns plus d(d-1)/2 infinitesimal rotations; for d = 2 the
    rotation generator sends p_i to (-y_i, x_i).
    """
    n, d = c.n, c.d
    p = c.points
    cols = []
    for a in range(d):
        col = np.zeros((n, d))
        col[:, a] = 1.0
        cols.append(col.reshape(-1))
    for a in range(d):
        for b in range(a + 1, d):
            gen = np.zeros((d, d))
            gen[a, b] = -1.0
            gen[b, a] = 1.0
            cols.append((p @ gen.T).reshape(-1))
    basis = np.column_stack(cols)
    if numerical_rank(basis) < basis.shape[1]:
        raise DegenerateConfigurationError(
            "rigid-motion columns are linearly dependent for this configuration"
        )
    q, _ = np.linalg.qr(basis)
    return q


def _require_enough_points(n: int, d: int) -> None:
    if n <= d:
        raise UnsupportedRegimeError(f"need n >= d+1 points (got n={n}, d={d})")


def is_infinitesimally_rigid(f: Framework) -> bool:
    _require_enough_points(f.n, f.d)
    return numerical_rank(rigidity_matrix(f)) == required_rank(f.n, f.d)


def is_infinitesimally_weakly_rigid(f: Framework, t: TripleSet) -> bool:
    _require_enough_points(f.n, f.d)
    return numerical_rank(weak_rigidity_matrix(f, t)) == required_rank(f.n, f.d)


def check_iwr_via_spanning_tree(f: Framework, tree: Graph, t: TripleSet) -> bool:
    """Sufficient test via the tree-edge Jacobian; False is inconclusive for d >= 3."""
    r = edge_weak_rigidity_matrix(f, tree, t)
    return numerical_rank(r) == required_rank(f.n, f.d)


def points_span_full_dimension(c: Configuration) -> bool:
    """True iff the points do not lie in a hyperplane of R^d."""
    _require_enough_points(c.n, c.d)
    m = np.hstack([np.ones((c.n, 1)), c.points])
    return numerical_rank(m) == c.d + 1
