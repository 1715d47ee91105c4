import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel_lab.acceptance import SHOWCASE, random_genus2, random_unimodular
from siegel_lab.eis_siegel import EisensteinContext, eisenstein_coeff
from siegel_lab.ikeda import (
    LiftContext,
    LiftContextError,
    LiftTable,
    eisenstein_as_lift,
    eisenstein_context,
    euler_factor_check,
    lift_coefficient,
    local_factor,
    phi_extract,
    phi_reconstruct,
    satake_params,
)
from siegel_lab.exact_math import l_value_neg
from siegel_lab.kohnen_plus import builtin_table
from siegel_lab.modforms1 import ramanujan_tau
from siegel_lab.ring_ext import AlphaBetaRing, QuotientField
from siegel_lab.siegel_series import HalfIntegralMatrix, SiegelSeriesPoly, invariants, kaufhold_F, local_F
from siegel_lab.stabilize import synthetic_plus

T1 = HalfIntegralMatrix.from_bracket(SHOWCASE["T1"])


def test_context_validation(f12):
    h = builtin_table("h13_2", f12)
    with pytest.raises(LiftContextError):
        LiftContext(2, 7, f12, h)  # parity
    with pytest.raises(LiftContextError):
        LiftContext(1, 6, f12, h)  # k - n odd
    ctx = LiftContext(2, 6, f12, h)
    assert (ctx.genus, ctx.weight) == (4, 8)


def test_showcase_lift_values(lift_ctxs, f32):
    c12, c32 = lift_ctxs
    assert lift_coefficient(c12, T1).to_rational() == ramanujan_tau(11) - 12 * 11**5 == -1398000
    # weight 32 scales phi(11) by 11^(k-1) = 11^15
    assert lift_coefficient(c32, T1) == f32.coeff(11) - 12 * 11**15


def test_conductor_one_is_fundamental_coefficient(lift_ctxs):
    c12, c32 = lift_ctxs
    A4 = HalfIntegralMatrix.from_bracket([1, 1, 1, 1, -1, 0, -1, 0, 0, -1])
    A1_A3 = HalfIntegralMatrix.from_bracket([1, 1, 1, 1, 0, 0, 1, 0, 0, 1])
    assert invariants(A4).disc == 5 and invariants(A1_A3).disc == 8
    assert lift_coefficient(c12, A4).to_rational() == 120
    assert lift_coefficient(c12, A1_A3).to_rational() == -240
    assert lift_coefficient(c32, A4) == c32.h.coeffs[5]


def test_satake_examples():
    ctx = eisenstein_context(2, 6)
    params = satake_params(ctx, 11)
    assert params.psi[0] == params.ring.scalar(11**9)
    one = eisenstein_context(1, 5)
    p1 = satake_params(one, 3)
    assert p1.psi[0] * p1.psi[1] == p1.ring.alpha


@given(st.integers(1, 3), st.sampled_from([2, 3, 5]), st.integers(-10**4, 10**4), st.integers(0, 3))
def test_satake_identities_symbolic(n, l, a_p, shift):
    k = n + 2 + 2 * shift
    ring = AlphaBetaRing(QuotientField.rationals(), a_p, l, 2 * k)
    params = satake_params(eisenstein_context(n, k), l, ring)
    assert params.fundamental_equation()
    assert params.unit_root_product() == ring.alpha**n


def test_phi_showcase():
    F = SiegelSeriesPoly(11, 4, (1, -1452, 161051))
    assert phi_extract(F, 11, 6, 2) == {1: 1, 11: -12}
    assert phi_extract(SiegelSeriesPoly(11, 4, (1,)), 11, 6, 2) == {1: 1}


def test_phi_reconstruction_random(f18):
    rng = random.Random(47)
    k, n = 9, 1
    checked = 0
    for T in random_genus2(rng, 200, bound=60):
        inv = invariants(T)
        for l in (2, 3, 5, 7):
            F = kaufhold_F(T, l)
            if F.v == 0:
                continue
            ring = AlphaBetaRing(QuotientField.rationals(), rng.randint(1, 10**6) * l + 1, l, 2 * k)
            phi = phi_extract(F, l, k, n)
            assert phi_reconstruct(phi, ring, k, F.v) == local_factor(ring, F, k, n)
            checked += 1
        if checked >= 50:
            break
    assert checked >= 50


def test_lift_values_descend_and_are_invariant(lift_ctxs):
    c12, c32 = lift_ctxs
    rng = random.Random(9)
    for name in ("T2", "T3"):
        T = HalfIntegralMatrix.from_bracket(SHOWCASE[name])
        for ctx in (c12, c32):
            ring = ctx.ring(11)
            assert ring.is_symmetric(local_factor(ring, local_F(T, 11), ctx.k, ctx.n))
            assert lift_coefficient(ctx, T) == lift_coefficient(ctx, T1)
            assert lift_coefficient(ctx, T.transform(random_unimodular(rng, 4))) == lift_coefficient(ctx, T)


def test_lift_unit_invariance_genus2(f18):
    ctx = LiftContext(1, 9, f18, synthetic_plus(9, f18.field, f18, seed=3))
    rng = random.Random(2)
    for T in random_genus2(rng, 30):
        U = random_unimodular(rng, 2)
        assert lift_coefficient(ctx, T.transform(U)) == lift_coefficient(ctx, T)


def test_eisenstein_as_lift_examples():
    T = HalfIntegralMatrix.from_bracket([1, 1, 1])
    assert eisenstein_as_lift(T, 3, 1) == Fraction(-2, 9) == l_value_neg(3, -3)
    D = HalfIntegralMatrix.diagonal(1, 9)
    assert eisenstein_as_lift(D, 3, 1) == eisenstein_coeff(EisensteinContext(1, 3), D)
    assert eisenstein_as_lift(D, 3, 1) == Fraction(-253, 2)


@given(st.integers(1, 30), st.integers(1, 30), st.integers(-30, 30), st.sampled_from([3, 5, 7]))
def test_eisenstein_dual_path_genus2(a, c, b, k):
    if b * b >= 4 * a * c:
        return
    T = HalfIntegralMatrix.from_bracket([a, c, b])
    assert eisenstein_as_lift(T, k, 1) == eisenstein_coeff(EisensteinContext(1, k), T)


def test_eisenstein_dual_path_genus4():
    for name in ("T1", "T2", "T3"):
        T = HalfIntegralMatrix.from_bracket(SHOWCASE[name])
        assert eisenstein_as_lift(T, 4, 2) == eisenstein_coeff(EisensteinContext(2, 4), T)


def test_lift_table_shares_entries(lift_ctxs):
    c12, _ = lift_ctxs
    tbl = LiftTable(c12)
    forms = [HalfIntegralMatrix.from_bracket(v) for v in SHOWCASE.values()]
    vals = [tbl[T] for T in forms]
    assert len(set(map(str, vals))) == 1
    assert len(tbl._by_key) == 1


@pytest.mark.parametrize("l", [2, 3, 5])
def test_euler_factors(lift_ctxs, f18, l):
    c12, c32 = lift_ctxs
    assert euler_factor_check(LiftContext(1, 9, f18, synthetic_plus(9, f18.field, f18)), l)
    assert euler_factor_check(c12, l)
    assert euler_factor_check(c32, l)
    assert euler_factor_check(eisenstein_context(2, 6), l)
