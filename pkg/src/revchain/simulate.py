"""Seeded trajectories and batch-means estimates of the asymptotic variance.

Randomness comes from numpy's PCG64 generator (``np.random.default_rng``),
seeded explicitly; the same seed and parameters reproduce a trajectory
exactly.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .hilbert import as_observable, variance
from .kernel import ReversiblePair
from .variance import asymptotic_variance

STATIONARY = "stationary"


def _cdf_rows(M: np.ndarray) -> list[list[float]]:
    """Cumulative rows, capped at exactly 1 from the last positive entry on."""
    rows = []
    for r in np.atleast_2d(M):
        c = np.cumsum(r)
        c /= c[-1]
        last = int(np.flatnonzero(r > 0)[-1])
        c[last:] = 1.0
        rows.append(c.tolist())
    return rows


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray
    seed: int
    initial_law: str | int = STATIONARY

    def __len__(self) -> int:
        return self.states.size


def sample_trajectory(pair: ReversiblePair, n: int, seed: int, initial_law: str | int = STATIONARY) -> Trajectory:
    """X_0, ..., X_{n-1}, with X_0 from ``initial_law`` (pi by default or a fixed state)."""
    if n < 1:
        raise ValueError("trajectory length must be at least 1")
    rng = np.random.default_rng(seed)
    u = rng.random(n).tolist()
    if initial_law == STATIONARY:
        x = bisect.bisect_right(_cdf_rows(pair.pi)[0], u[0])
    else:
        x = int(initial_law)
        if not 0 <= x < pair.n:
            raise ValueError(f"initial state {x} out of range")
    rows = _cdf_rows(pair.P)
    out = [0] * n
    out[0] = x
    for t in range(1, n):
        x = bisect.bisect_right(rows[x], u[t])
        out[t] = x
    states = np.array(out, dtype=np.int64)
    states.setflags(write=False)
    return Trajectory(states, seed, initial_law)


def ergodic_average(traj: Trajectory, h) -> float:
    h = as_observable(h)
    if traj.states.size and traj.states.max() >= h.size:
        raise ValueError(f"trajectory visits state {traj.states.max()} but h has {h.size} entries")
    return float(h[traj.states].mean())


@dataclass(frozen=True)
class BatchMeansEstimate:
    estimate: float
    batch_count: int
    batch_length: int
    standard_error: float


def empirical_asymptotic_variance(traj: Trajectory, h) -> BatchMeansEstimate:
    """Non-overlapping batch means with batch length floor(sqrt(n))."""
    n = len(traj)
    if n < 100:
        raise ValueError(f"batch means needs at least 100 steps, got {n}")
    h = as_observable(h)
    b = math.isqrt(n)
    a = n // b
    y = h[traj.states[: a * b]].reshape(a, b).mean(axis=1)
    est = b * float(np.var(y, ddof=1))
    return BatchMeansEstimate(est, a, b, est * math.sqrt(2.0 / (a - 1)))


@dataclass(frozen=True)
class SimulationVerdict:
    empirical: float
    exact: float
    standard_error: float
    tolerance: float
    passed: bool

    @property
    def error(self) -> float:
        return abs(self.empirical - self.exact)


def empirical_vs_exact(
    pair: ReversiblePair, h, n: int, seed: int, rel_tol: float = 0.1, initial_law: str | int = STATIONARY
) -> SimulationVerdict:
    """Batch-means estimate against the exact solve.

    Passes when |empirical - exact| <= rel_tol * max(exact, 0.01 Var_pi(h)) + 3 SE.
    Raises :class:`NotVarianceBoundingError` when the chain has no right gap.
    """
    if n < 10_000:
        raise ValueError("cross-check needs at least 10^4 steps")
    exact = asymptotic_variance(pair, h).value
    traj = sample_trajectory(pair, n, seed, initial_law)
    est = empirical_asymptotic_variance(traj, h)
    tol = rel_tol * max(exact, 0.01 * variance(pair.pi, h)) + 3.0 * est.standard_error
    return SimulationVerdict(est.estimate, exact, est.standard_error, tol, abs(est.estimate - exact) <= tol)
