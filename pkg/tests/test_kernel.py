import numpy as np
import pytest
from hypothesis import given, strategies as st

from revchain.errors import DimensionError, NonUniqueStationaryError, NotReversibleError
from revchain.generate import random_pair, random_pi
from revchain.hilbert import norm
from revchain.kernel import (
    ReversiblePair,
    apply,
    build_metropolis_hastings,
    check_detailed_balance,
    find_stationary,
    identity,
    lazy_mixture,
    self_adjoint_defect,
)

from oracles import loop_metropolis

NONREV = [[0.5, 0.5], [0.9, 0.1]]


def test_detailed_balance_examples(flip, lazy2):
    assert check_detailed_balance(flip.P, flip.pi) == 0
    assert check_detailed_balance(lazy2.P, lazy2.pi) == pytest.approx(0, abs=1e-15)
    assert check_detailed_balance(NONREV, [0.5, 0.5]) == pytest.approx(0.2, abs=1e-15)
    with pytest.raises(DimensionError):
        check_detailed_balance(NONREV, [0.2, 0.3, 0.5])


def test_pair_rejects_bad_inputs():
    with pytest.raises(NotReversibleError):
        ReversiblePair(NONREV, [0.5, 0.5])
    with pytest.raises(ValueError, match="row 1"):
        ReversiblePair([[0.5, 0.5], [0.5, 0.4]], [0.5, 0.5])
    with pytest.raises(DimensionError):
        ReversiblePair(np.eye(3), [0.5, 0.5])
    # raising the tolerance is an explicit opt-in
    ReversiblePair([[0.5, 0.5], [0.5 + 1e-9, 0.5 - 1e-9]], [0.5, 0.5], db_tolerance=1e-8)


def test_pair_is_immutable(lazy2):
    with pytest.raises(ValueError):
        lazy2.P[0, 0] = 1.0
    with pytest.raises(AttributeError):
        lazy2.pi = np.array([0.5, 0.5])


def test_find_stationary_examples():
    np.testing.assert_allclose(find_stationary([[0, 1], [1, 0]]), [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(find_stationary([[0.7, 0.3], [0.6, 0.4]]), [2 / 3, 1 / 3], atol=1e-15)
    with pytest.raises(NonUniqueStationaryError):
        find_stationary(np.eye(3))
    with pytest.raises(NonUniqueStationaryError):
        find_stationary([[1, 0, 0], [0, 0.5, 0.5], [0, 0.5, 0.5]])


def test_find_stationary_periodic_cycle():
    # deterministic 3-cycle: power iteration would never converge
    P = np.roll(np.eye(3), 1, axis=1)
    pi = find_stationary(P)
    np.testing.assert_allclose(pi, [1 / 3] * 3, atol=1e-14)


def test_apply_examples(flip, lazy2):
    np.testing.assert_array_equal(apply(flip.P, [1, -1]), [-1, 1])
    np.testing.assert_array_equal(apply(np.eye(4), [1, 2, 3, 4]), [1, 2, 3, 4])
    np.testing.assert_allclose(apply(lazy2.P, [1, 0]), [0.7, 0.6])
    with pytest.raises(DimensionError):
        apply(flip.P, [1, 2, 3])


def test_self_adjoint_defect_examples(flip, lazy2):
    rng = np.random.default_rng(3)
    for _ in range(5):
        f, g = rng.standard_normal((2, 2))
        assert self_adjoint_defect(flip, f, g) <= 1e-14
    assert self_adjoint_defect(lazy2, [1, 0], [0, 1]) <= 1e-14
    raw = ReversiblePair(NONREV, [0.5, 0.5], validate=False)
    # <Pf,g> - <f,Pg> = sum_xy (pi_x P_xy - pi_y P_yx) g_x f_y; here f=(0,1), g=(1,0) picks (0.25 - 0.45)
    assert self_adjoint_defect(raw, [0, 1], [1, 0]) == pytest.approx(0.2, abs=1e-15)


def test_mh_uniform_target():
    q = (np.ones((3, 3)) - np.eye(3)) / 2
    pair = build_metropolis_hastings([1 / 3] * 3, q)
    np.testing.assert_allclose(pair.P, q, atol=1e-15)


def test_mh3_matches_loop_oracle(mh3):
    expected = [[0, 0.5, 0.5], [1 / 3, 1 / 6, 0.5], [0.2, 0.3, 0.5]]
    np.testing.assert_allclose(mh3.P, expected, atol=1e-15)
    q = (np.ones((3, 3)) - np.eye(3)) / 2
    np.testing.assert_allclose(mh3.P, loop_metropolis([0.2, 0.3, 0.5], q), atol=1e-15)


def test_mh_one_way_proposal_forbidden():
    q = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    pair = build_metropolis_hastings([0.2, 0.3, 0.5], q)
    assert pair.P[0, 1] == 0 and pair.P[1, 2] == 0 and pair.P[2, 0] == 0
    np.testing.assert_allclose(pair.P, np.eye(3))
    assert check_detailed_balance(pair.P, pair.pi) <= 1e-12


def test_mh_errors():
    q = (np.ones((3, 3)) - np.eye(3)) / 2
    with pytest.raises(ValueError):
        build_metropolis_hastings([0.0, 0.5, 0.5], q)
    with pytest.raises(ValueError, match="row-stochastic"):
        build_metropolis_hastings([0.2, 0.3, 0.5], q * 0.9)


@given(st.integers(0, 2**32 - 1), st.integers(2, 10))
def test_mh_always_reversible(seed, n):
    rng = np.random.default_rng(seed)
    pi = random_pi(rng, n)
    q = rng.random((n, n)) * (rng.random((n, n)) > 0.3)
    q[np.arange(n), np.arange(n)] += 1e-3
    q /= q.sum(axis=1, keepdims=True)
    pair = build_metropolis_hastings(pi, q)
    assert check_detailed_balance(pair.P, pair.pi) <= 1e-12
    np.testing.assert_allclose(pair.P, loop_metropolis(pi, q), atol=1e-14)


def test_lazy_mixture_examples(flip, lazy2):
    assert lazy_mixture(lazy2, 1.0).P.tolist() == lazy2.P.tolist()
    np.testing.assert_allclose(lazy_mixture(flip, 0.5).P, [[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_allclose(lazy_mixture(lazy2, 0.5).P, [[0.85, 0.15], [0.3, 0.7]])
    for beta in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            lazy_mixture(lazy2, beta)


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 1.0))
def test_lazy_mixture_scales_off_diagonal(seed, beta):
    pair = random_pair(np.random.default_rng(seed))
    lazy = lazy_mixture(pair, beta)
    off = ~np.eye(pair.n, dtype=bool)
    np.testing.assert_allclose(lazy.P[off], beta * pair.P[off], rtol=1e-15, atol=0)
    assert check_detailed_balance(lazy.P, lazy.pi) <= 1e-12


@given(st.integers(0, 2**32 - 1))
def test_contraction_and_stationary_recovery(seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    for f in rng.standard_normal((5, pair.n)):
        assert norm(pair.pi, pair.P @ f) <= norm(pair.pi, f) + 1e-12
    np.testing.assert_allclose(find_stationary(pair.P), pair.pi, atol=1e-10)


def test_identity_fixture():
    pair = identity(4)
    assert pair.n == 4
    np.testing.assert_array_equal(pair.pi, [0.25] * 4)
