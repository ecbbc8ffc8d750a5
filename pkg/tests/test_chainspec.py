import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from revchain.chainspec import ChainSpec, dump_chain_spec, dumps, load_chain_spec, parse_chain_spec
from revchain.errors import ChainSpecError, NonUniqueStationaryError
from revchain.generate import random_pair
from revchain.spectral import decompose, gaps
from revchain.variance import asymptotic_variance

CHAINS = Path(__file__).resolve().parent.parent / "data" / "chains"


def test_flip_infers_pi():
    spec = load_chain_spec(CHAINS / "flip.chain")
    assert spec.pi_inferred
    np.testing.assert_allclose(spec.pi, [0.5, 0.5], atol=1e-15)


def test_mh3_built_from_proposal(mh3):
    spec = load_chain_spec(CHAINS / "mh3.chain")
    np.testing.assert_allclose(spec.P, mh3.P, atol=1e-15)
    assert spec.proposal is not None


def test_row_sum_error_names_row():
    with pytest.raises(ChainSpecError, match="row 1"):
        parse_chain_spec({"n": 2, "P": [[0.5, 0.5], [0.5, 0.4]]})


@pytest.mark.parametrize(
    "doc, match",
    [
        ({"n": 2}, "exactly one"),
        ({"n": 2, "P": [[1, 0], [0, 1]], "proposal": [[1, 0], [0, 1]]}, "exactly one"),
        ({"n": 2, "P": [[1, 0, 0], [0, 1, 0]]}, "shape"),
        ({"n": 2, "P": [[0, 1], [1, 0]], "functions": {"h": [1, 2, 3]}}, "function 'h'"),
        ({"n": 2, "P": [[0.5, 0.5], [0.9, 0.1]], "pi": [0.5, 0.5]}, "detailed balance"),
        ({"n": 2, "proposal": [[0, 1], [1, 0]]}, "target"),
        ({"n": 1, "P": [[1]]}, "'n'"),
        ({"n": 2, "P": "nope"}, "numeric"),
        ([1, 2], "object"),
    ],
)
def test_validation_errors(doc, match):
    with pytest.raises(ChainSpecError, match=match):
        parse_chain_spec(doc)


def test_reducible_chain_rejected():
    with pytest.raises(ChainSpecError) as info:
        parse_chain_spec({"n": 3, "P": np.eye(3).tolist()})
    assert isinstance(info.value.__cause__, NonUniqueStationaryError)


def test_unreadable_and_malformed(tmp_path):
    with pytest.raises(ChainSpecError, match="cannot read"):
        load_chain_spec(tmp_path / "missing.chain")
    bad = tmp_path / "bad.chain"
    bad.write_text("{not json")
    with pytest.raises(ChainSpecError, match="JSON"):
        load_chain_spec(bad)


def test_unknown_function_lists_names():
    spec = load_chain_spec(CHAINS / "lazy2.chain")
    with pytest.raises(ChainSpecError, match="h, indicator0"):
        spec.function("g")


def test_dumps_seventeen_digits():
    assert dumps({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}\n'
    assert dumps([1.0, -0.0, math.inf, None, True]) == '[1, 0, "inf", null, true]\n'
    assert json.loads(dumps({"a": [[0.1, 2 / 3]]}))["a"][0][1] == 2 / 3


@given(seed=st.integers(0, 2**32 - 1))
def test_round_trip_preserves_analyses(seed, tmp_path_factory):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    h = rng.standard_normal(pair.n)
    spec = ChainSpec(pair.n, pair.P, pair.pi, {"h": h})
    path = tmp_path_factory.mktemp("rt") / "chain.chain"
    path.write_text(dump_chain_spec(spec))
    back = load_chain_spec(path)
    np.testing.assert_array_equal(back.P, pair.P)
    np.testing.assert_array_equal(back.pi, pair.pi)
    np.testing.assert_array_equal(back.function("h"), h)
    g1, g2 = gaps(decompose(pair)), gaps(decompose(back.pair))
    assert abs(g1.rho_right - g2.rho_right) <= 1e-12
    v1, v2 = asymptotic_variance(pair, h).value, asymptotic_variance(back.pair, h).value
    assert abs(v1 - v2) <= 1e-12
