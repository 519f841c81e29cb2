"""Shared generators and finite-difference oracles for the test suite."""

import numpy as np

from weakrig import Configuration, Framework, Graph


def random_connected_graph(rng, n, extra_prob=0.3):
    """Random spanning tree plus independent extra edges."""
    edges = set()
    for v in range(2, n + 1):
        u = int(rng.integers(1, v))
        edges.add((u, v))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (i, j) not in edges and rng.random() < extra_prob:
                edges.add((i, j))
    return Graph(n, tuple(edges))


def random_framework(rng, n, d, graph=None):
    g = graph if graph is not None else random_connected_graph(rng, n)
    return Framework(g, Configuration(rng.uniform(-1.0, 1.0, size=(n, d))))


def random_rotation(rng, d):
    """Haar-ish orthogonal matrix with determinant +1."""
    a = rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rigid_transform(rng, config, reflect=False):
    """Apply a random rotation (optionally composed with a reflection) and shift."""
    d = config.d
    rot = random_rotation(rng, d)
    if reflect:
        flip = np.eye(d)
        flip[0, 0] = -1.0
        rot = rot @ flip
    shift = rng.uniform(-2.0, 2.0, size=d)
    return Configuration(config.points @ rot.T + shift)


def fd_gradient(func, x, h=1e-6):
    """Central-difference gradient of a scalar function of a flat vector."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        out[i] = (func(x + step) - func(x - step)) / (2.0 * h)
    return out


def fd_jacobian(func, x, h=1e-6):
    """Central-difference Jacobian of a vector function of a flat vector."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        cols.append((func(x + step) - func(x - step)) / (2.0 * h))
    return np.array(cols).T


def rel_err(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    diff = float(np.max(np.abs(a - b))) if a.size else 0.0
    return diff / scale
