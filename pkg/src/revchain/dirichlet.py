"""Dirichlet forms, the variational right gap, and flow-ratio orderings of kernels."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .hilbert import as_observable, inner, random_unit_mean_zero
from .kernel import ReversiblePair
from .spectral import SpectralDecomposition, decompose, gaps

FORM_TOL = 1e-8
ORDER_TOL = 1e-8


def dirichlet_operator_form(pair: ReversiblePair, f) -> float:
    """<f, f> - <f, P f>."""
    f = as_observable(f, pair.n)
    return inner(pair.pi, f, f) - inner(pair.pi, f, pair.P @ f)


def dirichlet_flow_form(pair: ReversiblePair, f) -> float:
    """Half the expected squared jump of f under pi(dx) P(x, dy)."""
    f = as_observable(f, pair.n)
    diff = f[None, :] - f[:, None]
    return 0.5 * float(np.sum(pair.flow * diff * diff))


def dirichlet_form(pair: ReversiblePair, f) -> float:
    """Dirichlet form of ``f``, evaluated two ways and cross-checked.

    Returns the squared-jump value; raises :class:`ConsistencyError` when the
    operator form disagrees by more than 1e-8 relative to ||f||^2.
    """
    f = as_observable(f, pair.n)
    jump = dirichlet_flow_form(pair, f)
    op = dirichlet_operator_form(pair, f)
    scale = max(1.0, inner(pair.pi, f, f))
    if abs(jump - op) > FORM_TOL * scale:
        raise ConsistencyError(f"Dirichlet forms disagree: squared-jump {jump!r} vs operator {op!r}")
    return jump


def top_mean_zero_eigenfunction(dec: SpectralDecomposition) -> np.ndarray:
    return np.array(dec.eigenfunctions[:, 1])


def variational_right_gap(pair: ReversiblePair, trials: int, seed: int, dec: SpectralDecomposition | None = None):
    """Minimise the Dirichlet form over random unit mean-zero functions.

    The candidate set always includes the eigenfunction at lambda0_max, so
    the estimate meets the exact right gap. Returns ``(estimate, exact)``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    dec = decompose(pair) if dec is None else dec
    exact = gaps(dec).rho_right
    rng = np.random.default_rng(seed)
    fs = random_unit_mean_zero(pair.pi, rng, size=trials)
    best = min(dirichlet_form(pair, f) for f in fs)
    best = min(best, dirichlet_form(pair, top_mean_zero_eigenfunction(dec)))
    return best, exact


@dataclass(frozen=True)
class OrderingCertificate:
    """gamma with D_{P1}(f) >= gamma D_{P2}(f) for all f.

    ``gamma`` is ``math.inf`` when P2 has no off-diagonal flow at all.
    ``witness`` is the state pair attaining the minimum ratio.
    """

    gamma: float
    witness: tuple[int, int] | None = None

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.gamma)


def flow_gamma(pair1: ReversiblePair, pair2: ReversiblePair) -> OrderingCertificate:
    """Smallest ratio of off-diagonal flows mu_1(x, y) / mu_2(x, y) over mu_2 > 0."""
    if pair1.n != pair2.n or np.max(np.abs(pair1.pi - pair2.pi)) > 1e-10:
        raise ValueError("kernels must share the same stationary distribution")
    mu1 = pair1.flow
    mu2 = pair2.flow
    best = math.inf
    witness = None
    n = pair1.n
    for x in range(n):
        for y in range(n):
            if x == y or mu2[x, y] <= 0:
                continue
            r = mu1[x, y] / mu2[x, y]
            if r < best:
                best, witness = float(r), (x, y)
    return OrderingCertificate(best, witness)


@dataclass(frozen=True)
class GapOrderingVerdict:
    rho1: float
    gamma_rho2: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.rho1 - self.gamma_rho2


def check_gap_ordering(pair1: ReversiblePair, pair2: ReversiblePair, cert: OrderingCertificate) -> GapOrderingVerdict:
    rho1 = gaps(decompose(pair1)).rho_right
    if cert.unbounded:
        # D_{P2} vanishes identically; nothing to compare
        return GapOrderingVerdict(rho1, 0.0, True)
    rhs = cert.gamma * gaps(decompose(pair2)).rho_right
    return GapOrderingVerdict(rho1, rhs, rho1 >= rhs - ORDER_TOL)
