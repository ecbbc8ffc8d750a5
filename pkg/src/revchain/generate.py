"""Seeded random reversible kernels for property sweeps."""
from __future__ import annotations

import numpy as np

from .kernel import ReversiblePair, build_metropolis_hastings


def random_pi(rng: np.random.Generator, n: int, floor: float = 1e-3) -> np.ndarray:
    """Dirichlet(1) draw, mixed with a little uniform mass so no state is negligible."""
    p = rng.dirichlet(np.ones(n))
    p = (1 - n * floor) * p + floor
    return p / p.sum()


def random_pair_for(
    rng: np.random.Generator, pi, sparsity: float = 0.0, laziness: float | None = None
) -> ReversiblePair:
    """Random kernel reversible for ``pi`` built from a symmetric flow matrix.

    Off-diagonal flows W are symmetric, so P(x, y) = W(x, y) / pi_x satisfies
    detailed balance; W is scaled so the busiest row keeps ``laziness`` of its
    mass on the diagonal. A ring of flows keeps the chain irreducible when
    ``sparsity`` removes edges.
    """
    pi = np.asarray(pi, dtype=float)
    n = pi.size
    W = rng.random((n, n))
    if sparsity > 0:
        W *= rng.random((n, n)) >= sparsity
        ring = np.roll(np.eye(n), 1, axis=1)
        W += ring * rng.uniform(0.1, 1.0, size=(n, 1))
    W = np.triu(W, 1)
    W = W + W.T
    out = W.sum(axis=1) / pi
    lazy = rng.uniform(0.0, 0.9) if laziness is None else laziness
    W *= (1.0 - lazy) / out.max()
    P = W / pi[:, None]
    P[np.diag_indices(n)] = 0.0
    P[np.diag_indices(n)] = 1.0 - P.sum(axis=1)
    return ReversiblePair(P, pi)


def random_pair(rng: np.random.Generator, n_min: int = 3, n_max: int = 10, sparsity: float | None = None) -> ReversiblePair:
    n = int(rng.integers(n_min, n_max + 1))
    s = float(rng.choice([0.0, 0.3, 0.6])) if sparsity is None else sparsity
    return random_pair_for(rng, random_pi(rng, n), sparsity=s)


def random_mh_pair(rng: np.random.Generator, pi) -> ReversiblePair:
    """Metropolis-Hastings kernel for ``pi`` with a random dense proposal."""
    n = len(pi)
    q = rng.random((n, n))
    q /= q.sum(axis=1, keepdims=True)
    return build_metropolis_hastings(pi, q)


def random_pair_couple(rng: np.random.Generator, n_min: int = 3, n_max: int = 10):
    """Two independent random kernels sharing one stationary distribution."""
    n = int(rng.integers(n_min, n_max + 1))
    pi = random_pi(rng, n)
    return random_pair_for(rng, pi), random_pair_for(rng, pi)


def random_discrete_law(rng: np.random.Generator, atoms_min: int = 2, atoms_max: int = 10):
    """(weights, values) of a random discrete law with non-constant values."""
    k = int(rng.integers(atoms_min, atoms_max + 1))
    w = rng.dirichlet(np.ones(k) * rng.uniform(0.2, 3.0))
    w = np.maximum(w, 1e-12)
    w /= w.sum()
    while True:
        v = rng.standard_normal(k) * rng.uniform(0.1, 10.0)
        if rng.random() < 0.3:
            v = np.round(v)
        if np.ptp(v) > 0:
            return w, v
