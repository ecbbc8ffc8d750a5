import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from revchain.errors import NotVarianceBoundingError
from revchain.generate import random_pair
from revchain.kernel import ReversiblePair, identity
from revchain.simulate import (
    empirical_asymptotic_variance,
    empirical_vs_exact,
    ergodic_average,
    sample_trajectory,
)

from conftest import LAZY2_UNIT


def test_flip_alternates(flip):
    assert sample_trajectory(flip, 4, seed=0, initial_law=0).states.tolist() == [0, 1, 0, 1]


def test_identity_is_constant():
    t = sample_trajectory(identity(5), 50, seed=3, initial_law=2)
    assert set(t.states.tolist()) == {2}
    assert ergodic_average(t, [0, 0, 7.5, 0, 0]) == 7.5


def test_bad_arguments(flip):
    with pytest.raises(ValueError):
        sample_trajectory(flip, 0, seed=0)
    with pytest.raises(ValueError):
        sample_trajectory(flip, 10, seed=0, initial_law=2)
    t = sample_trajectory(flip, 99, seed=0)
    with pytest.raises(ValueError):
        empirical_asymptotic_variance(t, [1, -1])
    with pytest.raises(ValueError):
        ergodic_average(t, [1])


def test_zero_probability_moves_never_taken():
    P = np.array([[0.5, 0.5, 0.0], [0.25, 0.5, 0.25], [0.0, 0.5, 0.5]])
    pair = ReversiblePair(P, [0.25, 0.5, 0.25])
    s = sample_trajectory(pair, 20_000, seed=11).states
    jumps = set(zip(s[:-1].tolist(), s[1:].tolist()))
    assert (0, 2) not in jumps and (2, 0) not in jumps


@given(st.integers(0, 2**63 - 1), st.integers(1, 300))
@settings(max_examples=20)
def test_determinism(seed, n):
    pair = random_pair(np.random.default_rng(seed % 2**32))
    a = sample_trajectory(pair, n, seed)
    b = sample_trajectory(pair, n, seed)
    assert a.states.tolist() == b.states.tolist()
    assert a.states.max() < pair.n


def test_flip_ergodic_average_cancels(flip):
    t = sample_trajectory(flip, 1000, seed=4)
    assert ergodic_average(t, [1, -1]) == 0


def test_lln_at_stationarity(lazy2):
    t = sample_trajectory(lazy2, 10**6, seed=2024)
    assert abs(np.mean(t.states == 0) - 2 / 3) <= 0.005
    assert abs(ergodic_average(t, [1, 0]) - 2 / 3) <= 0.01


def test_batch_means_layout(lazy2):
    t = sample_trajectory(lazy2, 10_007, seed=1)
    est = empirical_asymptotic_variance(t, LAZY2_UNIT)
    assert est.batch_length == 100 and est.batch_count == 100
    assert est.standard_error == pytest.approx(est.estimate * np.sqrt(2 / 99))


def test_batch_means_flip_is_zero(flip):
    t = sample_trajectory(flip, 10**4, seed=9)
    assert abs(empirical_asymptotic_variance(t, [1, -1]).estimate) <= 0.05


def test_batch_means_lazy2(lazy2):
    est = empirical_asymptotic_variance(sample_trajectory(lazy2, 10**6, seed=8), LAZY2_UNIT).estimate
    assert abs(est - 11 / 9) <= 0.1 * 11 / 9


def test_batch_means_iid_kernel():
    pi = np.array([0.1, 0.2, 0.3, 0.4])
    pair = ReversiblePair(np.tile(pi, (4, 1)), pi)
    h = np.array([3.0, -1.0, 0.5, 2.0])
    var_pi = float(pi @ (h - pi @ h) ** 2)
    est = empirical_asymptotic_variance(sample_trajectory(pair, 10**6, seed=5), h).estimate
    assert abs(est - var_pi) <= 0.1 * var_pi


@pytest.mark.parametrize("fixture,h", [("lazy2", LAZY2_UNIT), ("mh3", [0, 1, 2])])
def test_empirical_vs_exact(fixture, h, request):
    pair = request.getfixturevalue(fixture)
    v = empirical_vs_exact(pair, h, 10**6, seed=17, rel_tol=0.1)
    assert v.passed, v


def test_empirical_vs_exact_refuses(ident):
    with pytest.raises(NotVarianceBoundingError):
        empirical_vs_exact(ident, [1, 0, 0], 10**4, seed=0)
    with pytest.raises(ValueError):
        empirical_vs_exact(identity(2), [1, 0], 100, seed=0)


def test_stationarity_preserved(mh3):
    t_fixed = 7
    finals = np.array(
        [sample_trajectory(mh3, t_fixed + 1, seed=1000 + r).states[-1] for r in range(10_000)]
    )
    counts = np.bincount(finals, minlength=3)
    res = stats.chisquare(counts, 10_000 * mh3.pi)
    assert res.pvalue > 1e-4


@pytest.mark.slow
def test_batch_means_error_shrinks(lazy2):
    exact = 11 / 9
    medians = []
    for n in (10**4, 10**5, 10**6):
        errs = [
            abs(empirical_asymptotic_variance(sample_trajectory(lazy2, n, seed=s), LAZY2_UNIT).estimate - exact)
            for s in range(20)
        ]
        medians.append(np.median(errs))
    assert medians[0] > medians[1] > medians[2]
