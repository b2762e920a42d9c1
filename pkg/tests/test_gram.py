import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_grams, realizable_by_enumeration, symmetric_matrices
from z2embed.gf2 import Gf2Error, Gf2Matrix
from z2embed.gram import (
    OmegaKind,
    OmegaSpec,
    construct_Y,
    gram,
    min_beta,
    realizable,
    required_beta,
)


def _mat(a) -> Gf2Matrix:
    a = np.asarray(a)
    return Gf2Matrix.from_lists(a.tolist(), a.shape[1])


@st.composite
def symmetric(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = draw(st.integers(0, 1))
    return Gf2Matrix.from_lists(rows, n)


def test_omega_spec_validation():
    assert OmegaSpec("h", 4).kind is OmegaKind.TYPE_H
    assert OmegaSpec("I", 3).matrix() == Gf2Matrix.identity(3)
    with pytest.raises(ValueError):
        OmegaSpec("H", 3)
    with pytest.raises(ValueError):
        OmegaSpec("Q", 2)
    with pytest.raises(ValueError):
        OmegaSpec("I", -1)
    assert OmegaSpec.from_json(OmegaSpec("H", 2).to_json()) == OmegaSpec("H", 2)


def test_required_beta_examples():
    h1 = Gf2Matrix.hyperbolic(1)
    assert required_beta(h1, "I") == 3
    assert required_beta(h1, "H") == 2
    assert required_beta(Gf2Matrix.identity(2), "I") == 2
    assert required_beta(Gf2Matrix.identity(2), "H") is None
    assert required_beta(Gf2Matrix.zeros(3, 3), "H") == 0
    with pytest.raises(Gf2Error):
        min_beta(Gf2Matrix.identity(1), "H")


def test_hyperbolic_block_in_i3():
    y = construct_Y(Gf2Matrix.hyperbolic(1), OmegaSpec("I", 3))
    assert gram(y, OmegaSpec("I", 3)) == Gf2Matrix.hyperbolic(1)
    # both columns have even weight and they pair to 1
    cols = y.T.to_lists()
    assert all(sum(c) % 2 == 0 for c in cols)
    assert sum(x * z for x, z in zip(*cols)) % 2 == 1


def test_unrealizable_raises():
    with pytest.raises(Gf2Error):
        construct_Y(Gf2Matrix.hyperbolic(1), OmegaSpec("I", 2))
    with pytest.raises(Gf2Error):
        gram(Gf2Matrix.zeros(2, 2), OmegaSpec("I", 3))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("kind,betas", [("I", range(0, 5)), ("H", (0, 2, 4))])
def test_realizability_matches_enumeration(m, kind, betas):
    for beta in betas:
        grams = all_grams(m, kind, beta) if beta else {np.zeros(m * m, np.uint8).tobytes()}
        for a in symmetric_matrices(m):
            spec = OmegaSpec(kind, beta)
            expected = a.astype(np.uint8).tobytes() in grams
            assert realizable(_mat(a), spec) == expected, (a, spec)
            if expected:
                assert gram(construct_Y(_mat(a), spec), spec) == _mat(a)


def test_enumeration_oracles_agree():
    for a in symmetric_matrices(2):
        for kind, beta in [("I", 1), ("I", 2), ("I", 3), ("H", 2)]:
            assert realizable_by_enumeration(a, kind, beta) == (
                a.astype(np.uint8).tobytes() in all_grams(2, kind, beta))


@given(symmetric(), st.sampled_from(["I", "H"]), st.integers(0, 3))
def test_construct_y_reproduces_form(a, kind, slack):
    need = required_beta(a, kind)
    if need is None:
        return
    beta = need + (2 * slack if kind == "H" else slack)
    spec = OmegaSpec(kind, beta)
    y = construct_Y(a, spec)
    assert y.rows == beta and y.cols == a.rows
    assert gram(y, spec) == a


@given(symmetric(), st.sampled_from(["I", "H"]))
def test_realizability_is_monotone_in_beta(a, kind):
    step = 2 if kind == "H" else 1
    seen = False
    for beta in range(0, 2 * a.rows + 3, step):
        now = realizable(a, OmegaSpec(kind, beta))
        assert now or not seen
        seen = now
    need = required_beta(a, kind)
    assert seen == (need is not None)
