"""Eigendecomposition of reversible kernels and their spectral gaps.

With D = diag(pi), S = D^{1/2} P D^{-1/2} is symmetric under detailed
balance and shares the eigenvalues of P. The direction sqrt(pi) (the constant
function) is split off explicitly, so the remaining n - 1 eigenpairs span the
mean-zero subspace exactly even when the eigenvalue 1 is repeated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotReversibleError
from .hilbert import as_observable, center, norm
from .kernel import ReversiblePair

UNIT_EIGEN_TOL = 1e-8


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending, constant mode first) and pi-orthonormal eigenfunctions.

    ``eigenfunctions[:, i]`` belongs to ``eigenvalues[i]``; column 0 is the
    constant function.
    """

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    pi: np.ndarray

    @property
    def n(self) -> int:
        return self.pi.size

    @property
    def mean_zero_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[1:]


@dataclass(frozen=True)
class SpectralGapReport:
    lambda0_max: float
    lambda0_min: float
    rho_right: float
    rho_left: float
    lambda_bar: float

    @property
    def variance_bounding(self) -> bool:
        return self.rho_right > 1e-10


@dataclass(frozen=True)
class SpectralMeasure:
    """Discrete spectral measure of an observable: atoms (eigenvalue, mass)."""

    atoms: tuple[tuple[float, float], ...]

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([a[0] for a in self.atoms])

    @property
    def masses(self) -> np.ndarray:
        return np.array([a[1] for a in self.atoms])

    @property
    def mean_zero_atoms(self) -> tuple[tuple[float, float], ...]:
        """Atoms of the centred observable (everything but the constant mode)."""
        return self.atoms[1:]

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def moment(self, k: int) -> float:
        """<f, P^k f> = sum_i a_i^2 lambda_i^k."""
        return float(np.sum(self.masses * self.lambdas ** k))


def _complement_basis(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of unit vector ``u``.

    Uses the Householder reflector H with H e_0 = u; columns 1.. of H span
    the complement.
    """
    n = u.size
    e0 = np.zeros(n)
    e0[0] = 1.0
    w = e0 - u
    wn = np.linalg.norm(w)
    if wn < 1e-15:
        return np.eye(n)[:, 1:]
    w /= wn
    H = np.eye(n) - 2.0 * np.outer(w, w)
    return H[:, 1:]


def decompose(pair: ReversiblePair) -> SpectralDecomposition:
    pi = pair.pi
    if np.any(pi <= 0):
        raise ValueError("spectral decomposition needs strictly positive pi")
    s = np.sqrt(pi)
    S = (s[:, None] * pair.P) / s[None, :]
    asym = float(np.max(np.abs(S - S.T)))
    if asym > pair.db_tolerance:
        raise NotReversibleError(f"symmetrised kernel is asymmetric by {asym:.3e}")
    S = 0.5 * (S + S.T)

    B = _complement_basis(s)
    S0 = B.T @ S @ B
    vals, vecs = np.linalg.eigh(0.5 * (S0 + S0.T))
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    V = B @ vecs[:, order]

    top = float(s @ S @ s)
    eigenvalues = np.concatenate([[top], vals])
    V = np.column_stack([s, V])
    eigenfunctions = V / s[:, None]
    for a in (eigenvalues, eigenfunctions):
        a.setflags(write=False)
    return SpectralDecomposition(eigenvalues, eigenfunctions, pi)


def gaps(dec: SpectralDecomposition) -> SpectralGapReport:
    lam = np.clip(dec.mean_zero_eigenvalues, -1.0, 1.0)
    lmax = float(lam[0])
    lmin = float(lam[-1])
    if lmax > 1.0 - UNIT_EIGEN_TOL:
        # eigenvalue 1 is repeated: no right gap
        lmax = 1.0
    return SpectralGapReport(
        lambda0_max=lmax,
        lambda0_min=lmin,
        rho_right=1.0 - lmax,
        rho_left=1.0 + lmin,
        lambda_bar=max(abs(lmax), abs(lmin)),
    )


def spectral_measure(dec: SpectralDecomposition, f) -> SpectralMeasure:
    f = as_observable(f, dec.n)
    coeffs = (dec.pi * f) @ dec.eigenfunctions
    return SpectralMeasure(tuple((float(l), float(a * a)) for l, a in zip(dec.eigenvalues, coeffs)))


def decay_bound_check(pair: ReversiblePair, f, n_max: int, dec: SpectralDecomposition | None = None):
    """Compare ||P^k f0|| with lambda_bar^k ||f0|| for k = 1..n_max.

    Returns a list of ``(k, lhs, rhs)`` triples; the geometric bound holds when
    ``lhs <= rhs`` up to rounding.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    f = as_observable(f, pair.n)
    dec = decompose(pair) if dec is None else dec
    lam_bar = gaps(dec).lambda_bar
    f0 = center(pair.pi, f)
    base = norm(pair.pi, f0)
    out = []
    g = f0
    for k in range(1, n_max + 1):
        g = pair.P @ g
        out.append((k, norm(pair.pi, g), lam_bar ** k * base))
    return out


def residuals(pair: ReversiblePair, dec: SpectralDecomposition) -> np.ndarray:
    """Per-eigenpair residual max_x |(P e_i)(x) - lambda_i e_i(x)|."""
    if dec.n != pair.n:
        raise DimensionError("decomposition and pair disagree on the state count")
    R = pair.P @ dec.eigenfunctions - dec.eigenfunctions * dec.eigenvalues[None, :]
    return np.max(np.abs(R), axis=0)
