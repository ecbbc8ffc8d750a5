"""Set and kernel conductance, Cheeger bounds, and the Lawler-Sokal diagnostics.

Sets are bitmasks over states: bit x set means state x is in the set.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dirichlet import dirichlet_form
from .errors import ConsistencyError, SizeError
from .hilbert import as_observable, as_probability, inner, standardize
from .kernel import ReversiblePair
from .spectral import decompose, gaps

EXACT_MAX_STATES = 24
MASK_MAX_STATES = 63
HALF_TOL = 1e-12
CHEEGER_TOL = 1e-8
_CHUNK = 1 << 16


@dataclass(frozen=True)
class StateSet:
    mask: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MASK_MAX_STATES:
            raise ValueError(f"state sets support 1..{MASK_MAX_STATES} states, got {self.n}")
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} has bits outside {self.n} states")

    @classmethod
    def of(cls, states: Iterable[int], n: int) -> "StateSet":
        mask = 0
        for s in states:
            if not 0 <= s < n:
                raise ValueError(f"state {s} out of range for {n} states")
            mask |= 1 << s
        return cls(mask, n)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if self.mask >> x & 1)

    def complement(self) -> "StateSet":
        return StateSet(self.mask ^ ((1 << self.n) - 1), self.n)

    def indicator(self) -> np.ndarray:
        return np.array([self.mask >> x & 1 for x in range(self.n)], dtype=float)

    @property
    def proper(self) -> bool:
        return 0 < self.mask < (1 << self.n) - 1


def _as_set(A, n: int) -> StateSet:
    if isinstance(A, StateSet):
        if A.n != n:
            raise ValueError(f"set is over {A.n} states, kernel has {n}")
        return A
    return StateSet.of(A, n)


def set_conductance(pair: ReversiblePair, A) -> tuple[float, float]:
    """(kappa(A), kappa*(A)): flow out of A over pi(A), and over pi(A) pi(A^c)."""
    A = _as_set(A, pair.n)
    if not A.proper:
        raise ValueError("conductance needs a nonempty proper subset")
    ind = A.indicator().astype(bool)
    pA = float(pair.pi[ind].sum())
    pAc = float(pair.pi[~ind].sum())
    if pA <= 0 or pAc <= 0:
        raise ValueError("set and its complement must have positive probability")
    out = float(pair.flow[np.ix_(ind, ~ind)].sum())
    return out / pA, out / (pA * pAc)


@dataclass(frozen=True)
class ConductanceReport:
    kappa: float
    kappa_star: float
    argmin_kappa: StateSet
    argmin_kappa_star: StateSet
    mode: str
    sets_examined: int

    @property
    def upper_bound_only(self) -> bool:
        return self.mode == "sampled"


def _members_matrix(masks: np.ndarray, n: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(float)


def _argmin(values: np.ndarray, masks: np.ndarray) -> tuple[float, int]:
    """Minimum value, ties broken by the smallest mask."""
    idx = np.lexsort((masks, values))[0]
    return float(values[idx]), int(masks[idx])


class _Best:
    def __init__(self):
        self.value = np.inf
        self.mask = -1

    def update(self, values, masks):
        if values.size == 0:
            return
        v, m = _argmin(values, masks)
        if v < self.value or (v == self.value and m < self.mask):
            self.value, self.mask = v, m


def _scan(pair: ReversiblePair, masks: np.ndarray, best_k: _Best, best_ks: _Best):
    """Evaluate kappa and kappa* for each mask and its complement."""
    n = pair.n
    full = (1 << n) - 1
    M = _members_matrix(masks, n)
    mu = pair.flow
    pA = M @ pair.pi
    pAc = (1.0 - M) @ pair.pi
    out = np.einsum("ij,jk,ik->i", M, mu, 1.0 - M)
    comp = full ^ masks
    ks = out / (pA * pAc)
    both_masks = np.concatenate([masks, comp])
    best_ks.update(np.concatenate([ks, ks]), both_masks)
    kA = out / pA
    kAc = out / pAc
    vals = np.concatenate([kA, kAc])
    sizes = np.concatenate([pA, pAc])
    keep = sizes <= 0.5 + HALF_TOL
    best_k.update(vals[keep], both_masks[keep])


def kernel_conductance(
    pair: ReversiblePair, mode: str = "exact", samples: int = 0, seed: int | None = None
) -> ConductanceReport:
    """Kernel conductance kappa (sets with pi(A) <= 1/2) and kappa* (all sets).

    ``exact`` enumerates every split {A, A^c} once by fixing state 0 in A;
    ``sampled`` draws uniform random subsets and only yields upper bounds.
    """
    n = pair.n
    if np.any(pair.pi <= 0):
        raise ValueError("conductance needs strictly positive pi")
    best_k, best_ks = _Best(), _Best()
    if mode == "exact":
        if n > EXACT_MAX_STATES:
            raise SizeError(f"exact conductance supports at most {EXACT_MAX_STATES} states; use sampled mode")
        count = (1 << (n - 1)) - 1  # splits with state 0 in A, excluding A = everything
        for start in range(0, count, _CHUNK):
            k = np.arange(start, min(start + _CHUNK, count), dtype=np.int64)
            _scan(pair, (k << 1) | 1, best_k, best_ks)
        examined = 2 * count
    elif mode == "sampled":
        if samples < 1:
            raise ValueError("sampled mode needs samples >= 1")
        if seed is None:
            raise ValueError("sampled mode needs an explicit seed")
        if n > MASK_MAX_STATES:
            raise ValueError(f"at most {MASK_MAX_STATES} states supported")
        rng = np.random.default_rng(seed)
        full = (1 << n) - 1
        masks = []
        while len(masks) < samples:
            bits = rng.integers(0, 2, size=n)
            m = int(sum(int(b) << i for i, b in enumerate(bits)))
            if 0 < m < full:
                masks.append(m)
        _scan(pair, np.array(masks, dtype=np.int64), best_k, best_ks)
        examined = 2 * samples
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ConductanceReport(
        kappa=best_k.value,
        kappa_star=best_ks.value,
        argmin_kappa=StateSet(best_k.mask, n),
        argmin_kappa_star=StateSet(best_ks.mask, n),
        mode=mode,
        sets_examined=examined,
    )


def indicator_function(pi, A: StateSet) -> np.ndarray:
    """Unit-norm mean-zero f_A = (1_A - pi(A)) / sqrt(pi(A) pi(A^c))."""
    ind = A.indicator()
    pA = float(np.dot(pi, ind))
    return (ind - pA) / np.sqrt(pA * (1.0 - pA))


def indicator_dirichlet_check(pair: ReversiblePair, A, tol: float = 1e-10) -> tuple[float, float]:
    A = _as_set(A, pair.n)
    _, ks = set_conductance(pair, A)
    d = dirichlet_form(pair, indicator_function(pair.pi, A))
    if abs(d - ks) > tol:
        raise ConsistencyError(f"D_P(f_A) = {d!r} differs from kappa*(A) = {ks!r}")
    return d, ks


@dataclass(frozen=True)
class CheegerVerdict:
    """Margins of rho <= kappa*, kappa* <= 2 kappa, rho >= kappa*^2/2 and rho >= kappa^2/2.

    Each margin is (larger side) - (smaller side), so a non-negative margin
    means the inequality holds.
    """

    rho_right: float
    kappa: float
    kappa_star: float
    gap_below_kappa_star: float
    kappa_star_below_twice_kappa: float
    gap_above_kappa_star_sq: float
    gap_above_kappa_sq: float
    passed: bool

    @property
    def margins(self) -> tuple[float, float, float, float]:
        return (
            self.gap_below_kappa_star,
            self.kappa_star_below_twice_kappa,
            self.gap_above_kappa_star_sq,
            self.gap_above_kappa_sq,
        )


def cheeger_check(pair: ReversiblePair, report: ConductanceReport | None = None) -> CheegerVerdict:
    if report is None:
        report = kernel_conductance(pair, mode="exact")
    if report.upper_bound_only:
        raise ValueError("Cheeger lower bounds need exact conductance, not a sampled upper bound")
    rho = gaps(decompose(pair)).rho_right
    k, ks = report.kappa, report.kappa_star
    m = (ks - rho, 2 * k - ks, rho - ks * ks / 2, rho - k * k / 2)
    return CheegerVerdict(rho, k, ks, *m, passed=all(x >= -CHEEGER_TOL for x in m))


@dataclass(frozen=True)
class LawlerSokalDiagnostic:
    """Quantities from the two Cauchy-Schwarz/co-area steps with g = f + c.

    standard: D_P(f) >= E_mu|g(X)^2 - g(Y)^2|^2 / (8 E_pi g^2)
    beautiful: E_mu|g(X)^2 - g(Y)^2| >= kappa* E_{pi x pi}|g(X)^2 - g(Y)^2|
    """

    dirichlet: float
    standard_bound: float
    beautiful_lhs: float
    beautiful_rhs: float
    kappa_star: float

    @property
    def standard_holds(self) -> bool:
        return self.dirichlet >= self.standard_bound - CHEEGER_TOL

    @property
    def beautiful_holds(self) -> bool:
        return self.beautiful_lhs >= self.kappa_star * self.beautiful_rhs - CHEEGER_TOL

    @property
    def passed(self) -> bool:
        return self.standard_holds and self.beautiful_holds


def lawler_sokal_diagnostic(
    pair: ReversiblePair, f, c: float, kappa_star: float | None = None
) -> LawlerSokalDiagnostic:
    f = as_observable(f, pair.n)
    pi = pair.pi
    if abs(inner(pi, f, np.ones(pair.n))) > 1e-8 or abs(inner(pi, f, f) - 1.0) > 1e-8:
        raise ValueError("f must be mean-zero with unit pi-norm")
    if kappa_star is None:
        kappa_star = kernel_conductance(pair, mode="exact").kappa_star
    g2 = (f + c) ** 2
    jumps = np.abs(g2[:, None] - g2[None, :])
    e_mu = float(np.sum(pair.flow * jumps))
    e_pipi = float(pi @ jumps @ pi)
    e_g2 = float(np.dot(pi, g2))
    return LawlerSokalDiagnostic(
        dirichlet=dirichlet_form(pair, f),
        standard_bound=e_mu ** 2 / (8.0 * e_g2),
        beautiful_lhs=e_mu,
        beautiful_rhs=e_pipi,
        kappa_star=kappa_star,
    )


def moment_inequality_check(pi, f) -> float:
    """E|A^2 - B^2| + 4 (E|A - B|)^2 for A, B i.i.d. copies of the standardised f(X), X ~ pi.

    Evaluated exactly as double sums; raises :class:`ConsistencyError` if the
    value drops below 2.
    """
    pi = as_probability(pi)
    a = standardize(pi, as_observable(f, pi.size))
    w = np.outer(pi, pi)
    sq = float(np.sum(w * np.abs(a[:, None] ** 2 - a[None, :] ** 2)))
    ab = float(np.sum(w * np.abs(a[:, None] - a[None, :])))
    lhs = sq + 4.0 * ab * ab
    if lhs < 2.0 - 1e-10:
        raise ConsistencyError(f"moment inequality fails: {lhs!r} < 2")
    return lhs
