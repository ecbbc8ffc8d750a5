"""Asymptotic variance of ergodic averages for reversible kernels.

(I - P) is singular on constants, so it is only ever inverted on the
mean-zero subspace, through the bordered system

    [ I - P   1 ] [u]   [h0]
    [ pi^T    0 ] [c] = [ 0]

whose solution has <u, 1> = 0 and c = 0 whenever <h0, 1> = 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dirichlet import OrderingCertificate, dirichlet_form
from .errors import ConsistencyError, NotVarianceBoundingError
from .hilbert import as_observable, center, inner, random_unit_mean_zero
from .kernel import ReversiblePair
from .spectral import SpectralDecomposition, decompose, gaps, spectral_measure

VB_TOL = 1e-10
ILL_CONDITIONED_GAP = 1e-6
SOLVE_TOL = 1e-10
CROSS_TOL = 1e-8


def is_variance_bounding(pair: ReversiblePair, dec: SpectralDecomposition | None = None) -> bool:
    dec = decompose(pair) if dec is None else dec
    return gaps(dec).rho_right > VB_TOL


def _require_variance_bounding(dec: SpectralDecomposition):
    g = gaps(dec)
    if g.rho_right <= VB_TOL:
        raise NotVarianceBoundingError(
            f"right spectral gap is {g.rho_right:.3e}; asymptotic variance may be infinite"
        )
    return g


def solve_mean_zero(pair: ReversiblePair, h0) -> np.ndarray:
    """The mean-zero solution u of (I - P) u = h0, for mean-zero h0."""
    n = pair.n
    h0 = as_observable(h0, n)
    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = np.eye(n) - pair.P
    A[:n, n] = 1.0
    A[n, :n] = pair.pi
    b = np.concatenate([h0, [0.0]])
    sol = np.linalg.solve(A, b)
    u = sol[:n]
    resid = float(np.max(np.abs(u - pair.P @ u - h0)))
    scale = max(1.0, float(np.max(np.abs(h0))))
    if resid > SOLVE_TOL * scale:
        raise ConsistencyError(f"mean-zero solve residual {resid:.3e} exceeds tolerance")
    return u


@dataclass(frozen=True)
class VarianceReport:
    """Var(P, h) with its independent cross-checks.

    ``value`` is 2<h0, u> - <h0, h0> with u the mean-zero solution of
    (I - P) u = h0. ``resolvent_value`` is <h0, (I + P) u> and
    ``spectral_value`` sums (1 + l)/(1 - l) over the spectral atoms of h0.
    """

    value: float
    h_variance: float
    spectral_value: float
    resolvent_value: float
    upper_bound: float
    inverse_form: float
    lambda0_max: float
    variance_bounding: bool = True
    ill_conditioned: bool = False


def asymptotic_variance(pair: ReversiblePair, h, dec: SpectralDecomposition | None = None) -> VarianceReport:
    dec = decompose(pair) if dec is None else dec
    g = _require_variance_bounding(dec)
    ill = g.rho_right < ILL_CONDITIONED_GAP
    if ill:
        warnings.warn(
            f"right spectral gap {g.rho_right:.3e} is small; variance is ill-conditioned",
            RuntimeWarning,
            stacklevel=2,
        )
    h0 = center(pair.pi, as_observable(h, pair.n))
    hh = inner(pair.pi, h0, h0)
    u = solve_mean_zero(pair, h0)
    inv = inner(pair.pi, h0, u)
    value = 2.0 * inv - hh
    resolvent = inner(pair.pi, h0, u + pair.P @ u)

    atoms = spectral_measure(dec, h0).mean_zero_atoms
    spec = 0.0
    for lam, mass in atoms:
        spec += mass * (1.0 + lam) / (1.0 - lam)
    bound = (1.0 + g.lambda0_max) / (1.0 - g.lambda0_max) * hh

    scale = max(1.0, abs(value))
    if abs(value - spec) > CROSS_TOL * scale or abs(value - resolvent) > CROSS_TOL * scale:
        raise ConsistencyError(
            f"variance routes disagree: solve {value!r}, spectral {spec!r}, (I+P) form {resolvent!r}"
        )
    return VarianceReport(
        value=value,
        h_variance=hh,
        spectral_value=spec,
        resolvent_value=resolvent,
        upper_bound=bound,
        inverse_form=inv,
        lambda0_max=g.lambda0_max,
        ill_conditioned=ill,
    )


def inverse_objective(pair: ReversiblePair, f, g) -> float:
    """2<f, g> - <g, (I - P) g>."""
    g = as_observable(g, pair.n)
    Qg = g - pair.P @ g
    return 2.0 * inner(pair.pi, f, g) - inner(pair.pi, g, Qg)


def variance_objective(pair: ReversiblePair, h, g) -> float:
    """4<h0, g> - 2 D_P(g) - <h0, h0>; its supremum over mean-zero g is Var(P, h)."""
    h0 = center(pair.pi, as_observable(h, pair.n))
    return 4.0 * inner(pair.pi, h0, g) - 2.0 * dirichlet_form(pair, g) - inner(pair.pi, h0, h0)


@dataclass(frozen=True)
class InverseFormResult:
    sup_estimate: float
    exact: float
    optimizer_defect: float
    optimizer: np.ndarray


def variational_inverse_form(
    pair: ReversiblePair, f, trials: int, seed: int, dec: SpectralDecomposition | None = None
) -> InverseFormResult:
    """Compare <f, (I-P)^{-1} f> with the supremum of 2<f,g> - <g,(I-P)g>.

    Each random mean-zero direction d is scaled to its best multiple
    t = <f, d> / <d, (I-P) d>, so every candidate is a genuine g and the
    estimate stays a lower bound on ``exact``.
    """
    f = as_observable(f, pair.n)
    if abs(inner(pair.pi, f, np.ones(pair.n))) > 1e-10 * max(1.0, float(np.max(np.abs(f)))):
        raise ValueError("f must have zero mean under pi")
    dec = decompose(pair) if dec is None else dec
    _require_variance_bounding(dec)
    if trials < 1:
        raise ValueError("trials must be at least 1")

    gstar = solve_mean_zero(pair, f)
    exact = inner(pair.pi, f, gstar)
    defect = abs(inverse_objective(pair, f, gstar) - exact)

    rng = np.random.default_rng(seed)
    best = 0.0  # g = 0
    for d in random_unit_mean_zero(pair.pi, rng, size=trials):
        q = inner(pair.pi, d, d - pair.P @ d)
        t = inner(pair.pi, f, d) / q
        best = max(best, inverse_objective(pair, f, t * d))
    return InverseFormResult(best, exact, defect, gstar)


@dataclass(frozen=True)
class VarianceOrderingVerdict:
    """Outcome of Var(P1,h) + <h0,h0> <= (Var(P2,h) + <h0,h0>) / gamma.

    ``peskun`` is the plain comparison Var1 <= Var2, only checked when gamma >= 1.
    """

    lhs: float
    rhs: float
    passed: bool
    var1: float
    var2: float
    peskun: bool | None = None

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def check_variance_ordering(
    pair1: ReversiblePair, pair2: ReversiblePair, h, cert: OrderingCertificate
) -> VarianceOrderingVerdict:
    h0 = center(pair1.pi, as_observable(h, pair1.n))
    hh = inner(pair1.pi, h0, h0)
    dec1, dec2 = decompose(pair1), decompose(pair2)
    var2 = asymptotic_variance(pair2, h0, dec2).value if is_variance_bounding(pair2, dec2) else math.inf
    if cert.gamma <= 0 or cert.unbounded or math.isinf(var2):
        # right-hand side is +infinity
        var1 = asymptotic_variance(pair1, h0, dec1).value if is_variance_bounding(pair1, dec1) else math.inf
        return VarianceOrderingVerdict(var1 + hh, math.inf, True, var1, var2)
    if not is_variance_bounding(pair1, dec1):
        return VarianceOrderingVerdict(math.inf, (var2 + hh) / cert.gamma, False, math.inf, var2)
    var1 = asymptotic_variance(pair1, h0, dec1).value
    lhs = var1 + hh
    rhs = (var2 + hh) / cert.gamma
    passed = lhs <= rhs + CROSS_TOL
    peskun = None
    if cert.gamma >= 1:
        peskun = var1 <= var2 + CROSS_TOL
        passed = passed and peskun
    return VarianceOrderingVerdict(lhs, rhs, passed, var1, var2, peskun)
