"""Formation control laws on triple constraints, and the stability analyzer.

Two laws steer single-integrator agents toward a target shape encoded by
inner-product constraints: the gradient law u = -R_w^T delta descending the
global cost, and the per-agent law u_i = -K_i grad_i(V_i) built from local
costs, equivalently u = -K Rbar^T delta. The linearization K Rbar^T R_w at
the target decides local exponential stability: exactly d(d+1)/2 zero
eigenvalues with the rest in the open right half-plane.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .framework import (
    Configuration,
    Framework,
    TripleSet,
    distance_triple,
    weak_rigidity_function,
    weak_rigidity_matrix,
)
from .graphs import Graph, neighbors


class Law(enum.Enum):
    GRADIENT = "gradient"
    NONGRADIENT = "nongradient"


class Verdict(enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


@dataclass(frozen=True, eq=False)
class GainMatrix:
    """Per-agent d x d gain blocks; the full gain is their block diagonal."""

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = []
        d = None
        for b in self.blocks:
            arr = np.array(b, dtype=float)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise InputError("gain blocks must be square matrices")
            if d is None:
                d = arr.shape[0]
            elif arr.shape[0] != d:
                raise InputError("gain blocks must share one dimension")
            if not np.all(np.isfinite(arr)):
                raise InputError("gain blocks must be finite")
            arr.setflags(write=False)
            blocks.append(arr)
        if not blocks:
            raise InputError("gain needs at least one block")
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def d(self) -> int:
        return self.blocks[0].shape[0]

    def full(self) -> np.ndarray:
        """The (n*d, n*d) block-diagonal gain."""
        n, d = self.n, self.d
        k = np.zeros((n * d, n * d))
        for i, b in enumerate(self.blocks):
            k[i * d:(i + 1) * d, i * d:(i + 1) * d] = b
        return k

    def stacked(self) -> np.ndarray:
        return np.stack(self.blocks)

    @classmethod
    def identity(cls, n: int, d: int) -> "GainMatrix":
        return cls(tuple(np.eye(d) for _ in range(n)))


@dataclass(frozen=True, eq=False)
class FormationTarget:
    """Target shape as triple constraints with the values they must take.

    Always built from an explicit witness configuration, so the target is
    realizable by construction; raw constraint values are never accepted.
    """

    graph: Graph
    triples: TripleSet
    witness: Configuration
    values: np.ndarray = field(init=False)

    def __post_init__(self):
        self.triples.require_valid_for(self.graph)
        if self.graph.n != self.witness.n:
            raise InputError("witness configuration does not match the graph")
        vals = weak_rigidity_function(Framework(self.graph, self.witness), self.triples)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.witness.d


@dataclass(frozen=True, eq=False)
class ControllerSpec:
    law: Law
    target: FormationTarget
    gain: GainMatrix | None = None

    def __post_init__(self):
        if self.law is Law.NONGRADIENT:
            if self.gain is None:
                raise InputError("the non-gradient law requires a gain matrix")
            if self.gain.n != self.target.n or self.gain.d != self.target.d:
                raise InputError("gain blocks do not match the target size")


def build_formation_triples(gf: Graph, gs: Graph) -> TripleSet:
    """Triples usable by the gradient law: both legs are formation edges and
    the legs can sense each other (j = k or (j, k) a sensing edge)."""
    if gf.n != gs.n:
        raise InputError("formation and sensing graphs must share the vertex set")
    for e in gf.edges:
        if not gs.has_edge(*e):
            raise InputError(f"formation edge {e} missing from the sensing graph")
    trips = [distance_triple(i, j) for i, j in gf.edges]
    for i in range(1, gf.n + 1):
        nb = sorted(neighbors(gf, i))
        for a in range(len(nb)):
            for b in range(a + 1, len(nb)):
                if gs.has_edge(nb[a], nb[b]):
                    trips.append((i, nb[a], nb[b]))
    return TripleSet(tuple(sorted(trips)))


def residuals(p: Configuration, tgt: FormationTarget) -> np.ndarray:
    """delta(p): constraint values at p minus the target values."""
    return weak_rigidity_function(Framework(tgt.graph, p), tgt.triples) - tgt.values


def total_cost(p: Configuration, tgt: FormationTarget) -> float:
    """V = 0.5 |delta|^2; zero exactly on the target shape manifold."""
    delta = residuals(p, tgt)
    return 0.5 * float(delta @ delta)


def local_cost(i: int, p: Configuration, tgt: FormationTarget) -> float:
    """Per-agent cost: apex-owned angle residuals plus the residual of every
    incident edge (each edge is counted by both endpoints)."""
    if not 1 <= i <= tgt.n:
        raise InputError(f"agent {i} outside 1..{tgt.n}")
    delta = residuals(p, tgt)
    total = 0.0
    for t, (a, j, k) in enumerate(tgt.triples.triples):
        if j == k:
            if i == a or i == j:
                total += 0.5 * float(delta[t] ** 2)
        elif i == a:
            total += 0.5 * float(delta[t] ** 2)
    return total


def gradient_control(p: Configuration, tgt: FormationTarget) -> np.ndarray:
    """u = -R_w(p)^T delta(p), the negative gradient of the total cost."""
    rw = weak_rigidity_matrix(Framework(tgt.graph, p), tgt.triples)
    return -(rw.T @ residuals(p, tgt))


def barred_weak_rigidity_matrix(p: Configuration, tgt: FormationTarget) -> np.ndarray:
    """The matrix Rbar with stacked per-agent gradients of the local costs
    equal to Rbar^T delta: distance rows match R_w, angle rows keep only the
    apex block."""
    tgt.triples.require_valid_for(tgt.graph)
    ap, l1, l2 = tgt.triples.index_arrays()
    pts = p.points
    if pts.shape[0] != tgt.n:
        raise InputError("configuration does not match the target size")
    s = tgt.triples.s
    e1 = pts[ap] - pts[l1]
    e2 = pts[ap] - pts[l2]
    rows = np.arange(s)
    dist = l1 == l2
    m = np.zeros((s, tgt.n, p.d))
    np.add.at(m, (rows, ap), e1 + e2)
    np.add.at(m, (rows[dist], l1[dist]), -e2[dist])
    np.add.at(m, (rows[dist], l2[dist]), -e1[dist])
    return m.reshape(s, tgt.n * p.d)


def nongradient_control(p: Configuration, tgt: FormationTarget,
                        gain: GainMatrix) -> np.ndarray:
    """u = -K Rbar(p)^T delta(p); agent i applies K_i to its local-cost gradient."""
    rb = barred_weak_rigidity_matrix(p, tgt)
    return -(gain.full() @ (rb.T @ residuals(p, tgt)))


class ControlEvaluator:
    """Precompiled closed-loop evaluator for repeated integration steps.

    Produces the same velocities as ``gradient_control``/``nongradient_control``
    (asserted by the test suite) without rebuilding matrices per call.
    """

    def __init__(self, spec: ControllerSpec):
        tgt = spec.target
        tgt.triples.require_valid_for(tgt.graph)
        self.n = tgt.n
        self.d = tgt.d
        self._ap, self._l1, self._l2 = tgt.triples.index_arrays()
        self._rstar = tgt.values
        self._gain = spec.gain.stacked() if spec.law is Law.NONGRADIENT else None
        # one fused scatter per axis: apex rows always contribute through both
        # edge vectors, leg rows only where the law differentiates through them
        dist = self._l1 == self._l2
        s = len(dist)
        leg_rows = np.nonzero(dist)[0] if self._gain is not None else np.arange(s)
        self._heads = np.concatenate([self._ap, self._ap])
        self._tails = np.concatenate([self._l1, self._l2])
        # rows of the (2s, d) premultiplied edge array feeding the leg entries:
        # e2 lives at offset s, e1 at offset 0
        self._leg_sel = np.concatenate([s + leg_rows, leg_rows])
        self._scatter_idx = np.concatenate(
            [self._heads, self._l1[leg_rows], self._l2[leg_rows]])

    def residuals(self, pts: np.ndarray) -> np.ndarray:
        e1 = pts[self._ap] - pts[self._l1]
        e2 = pts[self._ap] - pts[self._l2]
        return np.einsum("ij,ij->i", e1, e2) - self._rstar

    def cost(self, pts: np.ndarray) -> float:
        delta = self.residuals(pts)
        return 0.5 * float(delta @ delta)

    def velocity(self, pts: np.ndarray) -> np.ndarray:
        """(n, d) agent velocities at the given positions."""
        return self.velocity_and_residuals(pts)[0]

    def velocity_and_residuals(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Velocity plus the residual vector, sharing the edge-vector work."""
        s = self._rstar.size
        edges = pts[self._heads] - pts[self._tails]  # e1 rows then e2 rows
        delta = np.einsum("ij,ij->i", edges[:s], edges[s:]) - self._rstar
        scaled = edges * np.concatenate([delta, delta])[:, None]
        weights = np.concatenate([scaled, -scaled[self._leg_sel]])
        grad = np.empty_like(pts)
        for axis in range(self.d):
            grad[:, axis] = np.bincount(self._scatter_idx, weights[:, axis],
                                        minlength=self.n)
        if self._gain is None:
            return -grad, delta
        return -np.einsum("nij,nj->ni", self._gain, grad), delta


@dataclass(frozen=True, eq=False)
class StabilityReport:
    verdict: Verdict
    eigenvalues: np.ndarray  # sorted by (real desc, imag desc)


def jacobian_at_target(tgt: FormationTarget, gain: GainMatrix) -> np.ndarray:
    """K Rbar^T R_w evaluated at the target witness configuration."""
    rw = weak_rigidity_matrix(Framework(tgt.graph, tgt.witness), tgt.triples)
    rb = barred_weak_rigidity_matrix(tgt.witness, tgt)
    return gain.full() @ (rb.T @ rw)


def sort_eigenvalues(ev: np.ndarray) -> np.ndarray:
    """Order by real part descending, then imaginary part descending."""
    ev = np.asarray(ev, dtype=complex)
    return ev[np.lexsort((-ev.imag, -ev.real))]


def classify_stability(j: np.ndarray, d: int) -> StabilityReport:
    """Stable: exactly d(d+1)/2 eigenvalues at zero (within tolerance), the
    rest with positive real part. Unstable: any eigenvalue with real part
    below -tolerance. Marginal otherwise."""
    ev = sort_eigenvalues(np.linalg.eigvals(np.asarray(j, dtype=float)))
    tol = 1e-6 * max(1.0, float(np.max(np.abs(ev))) if ev.size else 0.0)
    near_zero = np.abs(ev) <= tol
    expected_zeros = d * (d + 1) // 2
    if int(near_zero.sum()) == expected_zeros and np.all(ev.real[~near_zero] > tol):
        verdict = Verdict.STABLE
    elif np.any(ev.real < -tol):
        verdict = Verdict.UNSTABLE
    else:
        verdict = Verdict.MARGINAL
    return StabilityReport(verdict, ev)


def gain_search(tgt: FormationTarget, trials: int, seed: int) -> GainMatrix | None:
    """Sample diagonal gain blocks with entries uniform on [-1.5, 1.5] and
    return the first stabilizing gain, or None. Trial seeds are derived as
    seed + trial index, so results are reproducible and trials independent."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    n, d = tgt.n, tgt.d
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        entries = rng.uniform(-1.5, 1.5, size=(n, d))
        gain = GainMatrix(tuple(np.diag(row) for row in entries))
        report = classify_stability(jacobian_at_target(tgt, gain), d)
        if report.verdict is Verdict.STABLE:
            return gain
    return None
