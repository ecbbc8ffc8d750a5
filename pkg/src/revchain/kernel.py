"""Reversible transition kernels on a finite state space."""
from __future__ import annotations

from dataclasses import dataclass, field, InitVar

import numpy as np

from .errors import DimensionError, NonUniqueStationaryError, NotReversibleError
from .hilbert import as_observable, as_probability, inner

ROW_TOL = 1e-12
DB_TOL = 1e-10
STATIONARY_TOL = 1e-10


def as_kernel(P, tol: float = ROW_TOL) -> np.ndarray:
    """Validate a row-stochastic matrix."""
    M = np.asarray(P, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"kernel must be square, got shape {M.shape}")
    if M.shape[0] < 2:
        raise ValueError("kernel needs at least 2 states")
    if not np.all(np.isfinite(M)):
        raise ValueError("kernel has non-finite entries")
    if np.any(M < 0):
        r, c = np.argwhere(M < 0)[0]
        raise ValueError(f"kernel entry ({r}, {c}) is negative: {M[r, c]!r}")
    bad = np.flatnonzero(np.abs(M.sum(axis=1) - 1.0) > tol)
    if bad.size:
        r = bad[0]
        raise ValueError(f"row {r} sums to {M[r].sum()!r}, not 1")
    return M


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def check_detailed_balance(P, pi) -> float:
    """Largest violation max_{x,y} |pi_x P(x,y) - pi_y P(y,x)|."""
    P = np.asarray(P, dtype=float)
    pi = np.asarray(pi, dtype=float)
    if P.shape != (pi.size, pi.size):
        raise DimensionError(f"kernel shape {P.shape} does not match {pi.size} states")
    flow = pi[:, None] * P
    return float(np.max(np.abs(flow - flow.T)))


@dataclass(frozen=True)
class ReversiblePair:
    """A kernel ``P`` together with a distribution ``pi`` it is reversible for.

    Construction validates row-stochasticity, detailed balance up to
    ``db_tolerance`` and stationarity. Pass ``validate=False`` to wrap an
    arbitrary matrix (used only to probe what breaks without reversibility).
    """

    P: np.ndarray
    pi: np.ndarray
    db_tolerance: float = DB_TOL
    validate: InitVar[bool] = True
    db_violation: float = field(init=False)

    def __post_init__(self, validate: bool):
        if validate:
            P = as_kernel(self.P)
            pi = as_probability(self.pi)
        else:
            P = np.asarray(self.P, dtype=float)
            pi = np.asarray(self.pi, dtype=float)
        if P.shape != (pi.size, pi.size):
            raise DimensionError(f"kernel shape {P.shape} does not match {pi.size} states")
        viol = check_detailed_balance(P, pi)
        if validate:
            if viol > self.db_tolerance:
                raise NotReversibleError(
                    f"detailed balance violated by {viol:.3e} (tolerance {self.db_tolerance:.1e})"
                )
            drift = float(np.max(np.abs(pi @ P - pi)))
            # (pi P - pi)_y sums n detailed-balance defects
            if drift > max(STATIONARY_TOL, pi.size * self.db_tolerance):
                raise NotReversibleError(f"pi is not stationary: max |pi P - pi| = {drift:.3e}")
        object.__setattr__(self, "P", _frozen(P))
        object.__setattr__(self, "pi", _frozen(pi))
        object.__setattr__(self, "db_violation", viol)

    @property
    def n(self) -> int:
        return self.pi.size

    @property
    def flow(self) -> np.ndarray:
        """The symmetric measure mu(x, y) = pi_x P(x, y)."""
        return self.pi[:, None] * self.P


def find_stationary(P) -> np.ndarray:
    """Stationary distribution of an irreducible kernel.

    Solves pi (I - P) = 0 together with sum(pi) = 1 as one overdetermined
    system, so periodic chains are handled. Raises
    :class:`NonUniqueStationaryError` when the eigenvalue 1 is not simple.
    """
    P = as_kernel(P)
    n = P.shape[0]
    A = np.eye(n) - P
    sv = np.linalg.svd(A, compute_uv=False)
    # rank(I - P) = n - 1 iff 1 is a simple eigenvalue
    if sv[-2] <= 1e-10 * max(1.0, sv[0]):
        raise NonUniqueStationaryError("eigenvalue 1 is not simple; the stationary distribution is not unique")
    M = np.vstack([A.T, np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(M, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def apply(P, f) -> np.ndarray:
    """(Pf)(x) = sum_y P(x, y) f(y)."""
    P = np.asarray(P, dtype=float)
    f = as_observable(f, P.shape[1])
    return P @ f


def self_adjoint_defect(pair: ReversiblePair, f, g) -> float:
    """|<Pf, g> - <f, Pg>| in L^2(pi)."""
    return abs(inner(pair.pi, apply(pair.P, f), g) - inner(pair.pi, f, apply(pair.P, g)))


def build_metropolis_hastings(pi, q) -> ReversiblePair:
    """Metropolis-Hastings kernel for target ``pi`` and proposal matrix ``q``.

    Off-diagonal moves are q(x,y) * min(1, pi_y q(y,x) / (pi_x q(x,y))); a move
    whose reverse is never proposed is forbidden. Rejected mass stays on the
    diagonal.
    """
    pi = as_probability(pi)
    if np.any(pi <= 0):
        raise ValueError("target must have strictly positive entries")
    q = np.asarray(q, dtype=float)
    if q.shape != (pi.size, pi.size):
        raise DimensionError(f"proposal shape {q.shape} does not match {pi.size} states")
    try:
        q = as_kernel(q)
    except ValueError as exc:
        raise ValueError(f"proposal is not row-stochastic: {exc}") from None
    fwd = pi[:, None] * q
    rev = fwd.T
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where((fwd > 0) & (rev > 0), np.minimum(1.0, rev / fwd), 0.0)
    P = q * alpha
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(P, 1.0 - P.sum(axis=1))
    return ReversiblePair(P, pi)


def lazy_mixture(pair: ReversiblePair, beta: float) -> ReversiblePair:
    """(1 - beta) I + beta P, reversible for the same pi."""
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta!r}")
    P = beta * pair.P
    P[np.diag_indices_from(P)] += 1.0 - beta
    return ReversiblePair(P, pair.pi, db_tolerance=pair.db_tolerance)


def flip() -> ReversiblePair:
    """Deterministic two-state alternation; periodic but variance bounding."""
    return ReversiblePair([[0.0, 1.0], [1.0, 0.0]], [0.5, 0.5])


def lazy2() -> ReversiblePair:
    return ReversiblePair([[0.7, 0.3], [0.6, 0.4]], [2 / 3, 1 / 3])


def mh3() -> ReversiblePair:
    q = (np.ones((3, 3)) - np.eye(3)) / 2
    return build_metropolis_hastings([0.2, 0.3, 0.5], q)


def identity(n: int) -> ReversiblePair:
    return ReversiblePair(np.eye(n), np.full(n, 1.0 / n))
