"""Inner-product primitives of L^2(pi) for a finite state space.

A probability vector ``pi`` and observables ``f``, ``g`` are plain 1-d numpy
arrays indexed by state 0..n-1.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError

PROB_TOL = 1e-12


def as_probability(pi, tol: float = PROB_TOL) -> np.ndarray:
    """Validate ``pi`` as a probability vector and return it as a float array."""
    p = np.asarray(pi, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ValueError(f"probability vector must be 1-d with at least 2 states, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("probability vector has non-finite entries")
    if np.any(p < 0):
        raise ValueError(f"probability vector has negative entries: {p}")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probability vector sums to {p.sum()!r}, not 1")
    return p


def as_observable(f, n: int | None = None) -> np.ndarray:
    v = np.asarray(f, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"observable must be 1-d, got shape {v.shape}")
    if n is not None and v.size != n:
        raise DimensionError(f"observable has {v.size} entries, expected {n}")
    return v


def _check(pi, *fs):
    pi = np.asarray(pi, dtype=float)
    out = [as_observable(f, pi.size) for f in fs]
    return pi, out


def inner(pi, f, g) -> float:
    """<f, g> = sum_x pi_x f_x g_x."""
    pi, (f, g) = _check(pi, f, g)
    return float(np.dot(pi * f, g))


def norm(pi, f) -> float:
    return float(np.sqrt(max(inner(pi, f, f), 0.0)))


def mean(pi, f) -> float:
    return inner(pi, f, np.ones_like(pi))


def center(pi, f) -> np.ndarray:
    """Project ``f`` onto the mean-zero subspace: f - <f, 1>."""
    pi, (f,) = _check(pi, f)
    return f - float(np.dot(pi, f))


def variance(pi, f) -> float:
    f0 = center(pi, f)
    return max(inner(pi, f0, f0), 0.0)


def standardize(pi, f) -> np.ndarray:
    """Centre and scale ``f`` to unit pi-variance."""
    f0 = center(pi, f)
    v = inner(pi, f0, f0)
    if v <= 0:
        raise ValueError("cannot standardize an observable with zero variance")
    return f0 / np.sqrt(v)


def random_unit_mean_zero(pi, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Standard-normal vectors centred and normalised in L^2(pi).

    With ``size`` given, returns an array of shape ``(size, n)``.
    """
    pi = np.asarray(pi, dtype=float)
    shape = (pi.size,) if size is None else (size, pi.size)
    z = rng.standard_normal(shape)
    z = z - (z @ pi)[..., None]
    nrm = np.sqrt(np.einsum("...i,i,...i->...", z, pi, z))
    return z / nrm[..., None]
