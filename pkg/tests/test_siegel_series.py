import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel_lab.acceptance import SHOWCASE, random_genus2, random_unimodular
from siegel_lab.exact_math import factor_integer
from siegel_lab.siegel_series import (
    HalfIntegralMatrix,
    NotPositiveDefinite,
    SiegelSeriesBoundError,
    bounded_b_coefficients,
    complete_F,
    invariants,
    kaufhold_F,
    local_F,
    rank1_F,
    siegel_F,
)

T1 = HalfIntegralMatrix.from_bracket(SHOWCASE["T1"])


def test_invariants_examples():
    inv = invariants(T1)
    assert (inv.disc, inv.fundamental, inv.conductor) == (121, 1, 11)
    inv = invariants(HalfIntegralMatrix.diagonal(1, 1))
    assert (inv.disc, inv.fundamental, inv.conductor) == (-4, -4, 1)
    T = HalfIntegralMatrix.from_bracket([2, 6, 0])
    inv = invariants(T)
    assert (T.content(), inv.disc, inv.fundamental, inv.conductor) == (2, -48, -3, 4)


def test_bracket_round_trip():
    assert T1.bracket() == SHOWCASE["T1"]
    assert T1.det_doubled() == 121


def test_not_positive_definite():
    with pytest.raises(NotPositiveDefinite):
        invariants(HalfIntegralMatrix.from_bracket([1, 1, 4]))


def test_closed_form_examples():
    assert kaufhold_F(HalfIntegralMatrix.diagonal(1, 1), 3).coeffs == (1,)
    assert kaufhold_F(HalfIntegralMatrix.diagonal(1, 9), 3).coeffs == (1, 3, 27)
    assert kaufhold_F(HalfIntegralMatrix.from_bracket([2, 6, 0]), 2).coeffs == (1, 6, 16, 48, 64)


def test_closed_form_examples_by_enumeration():
    for T, p in ((HalfIntegralMatrix.diagonal(1, 9), 3), (HalfIntegralMatrix.from_bracket([2, 6, 0]), 2)):
        assert siegel_F(T, p, method="full").coeffs == kaufhold_F(T, p).coeffs


def test_rank1_F():
    assert rank1_F(7, 3) == [1]
    assert rank1_F(9, 3) == [1, 3, 9]
    assert rank1_F(12, 2) == [1, 2, 4]


def test_genus4_showcase():
    assert bounded_b_coefficients(T1, 11, 0) == [1]
    b = bounded_b_coefficients(T1, 11, 1)
    F = complete_F(b, invariants(T1), 11, 4)
    assert F.coeffs[1] == -1452
    assert F.coeffs[-1] == 11**5


@pytest.mark.parametrize("name", ["T1", "T2", "T3"])
def test_showcase_F11(name):
    T = HalfIntegralMatrix.from_bracket(SHOWCASE[name])
    assert siegel_F(T, 11).coeffs == (1, -1452, 161051)


def test_dual_path_genus2_random():
    rng = random.Random(12)
    for T in random_genus2(rng, 100, bound=30):
        for l in factor_integer(invariants(T).conductor).factors if invariants(T).conductor > 1 else ():
            if l ** (3 * len(kaufhold_F(T, l).coeffs) // 2) > 10**6:
                continue
            assert siegel_F(T, l).coeffs == kaufhold_F(T, l).coeffs, (T, l)


def test_rank1_shortcut_matches_full():
    rng = random.Random(5)
    seen = 0
    for T in random_genus2(rng, 300, bound=30):
        inv = invariants(T)
        for l, v in (factor_integer(inv.conductor).factors.items() if inv.conductor > 1 else ()):
            if v == 1 and l <= 13:
                full = bounded_b_coefficients(T, l, 1, method="full")
                assert bounded_b_coefficients(T, l, 1, method="rank1") == full
                assert bounded_b_coefficients(T, l, 1, method="stratified") == full
                seen += 1
    assert seen > 10


def test_budget_is_reported():
    with pytest.raises(SiegelSeriesBoundError):
        bounded_b_coefficients(T1, 11, 1, method="full", budget=1000)


@st.composite
def genus2(draw):
    a = draw(st.integers(1, 25))
    c = draw(st.integers(1, 25))
    b = draw(st.integers(-a, a))
    if b * b >= 4 * a * c:
        b = 0
    return HalfIntegralMatrix.from_bracket([a, c, b])


@given(genus2(), st.sampled_from([2, 3, 5, 7]))
def test_pairing(T, l):
    assert kaufhold_F(T, l).pairing_holds()


@given(genus2(), st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_unimodular_invariance_genus2(T, l, seed):
    U = random_unimodular(random.Random(seed), 2)
    assert kaufhold_F(T.transform(U), l) == kaufhold_F(T, l)
    assert siegel_F(T.transform(U), l).coeffs == siegel_F(T, l).coeffs


@given(genus2(), st.sampled_from([3, 5, 7]), st.sampled_from([1, 2, 4, 8, 11]))
def test_unit_scaling_invariance(T, l, u):
    if u % l == 0:
        return
    assert kaufhold_F(T.scale(u), l).coeffs == kaufhold_F(T, l).coeffs


def test_unimodular_invariance_genus4():
    rng = random.Random(44)
    for name in ("T1", "T2"):
        T = HalfIntegralMatrix.from_bracket(SHOWCASE[name])
        T2 = T.transform(random_unimodular(rng, 4))
        assert invariants(T2).disc == 121
        assert local_F(T2, 11) == local_F(T, 11)
