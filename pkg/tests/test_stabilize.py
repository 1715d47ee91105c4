import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siegel_lab import poly
from siegel_lab.acceptance import SHOWCASE, random_genus2
from siegel_lab.eis_siegel import EisensteinContext, stabilized_eisenstein_coeff
from siegel_lab.exact_math import kronecker
from siegel_lab.ikeda import LiftContext, eisenstein_context, lift_coefficient, satake_params
from siegel_lab.ring_ext import AlphaBetaRing, NonOrdinaryError, QuotientField
from siegel_lab.siegel_series import HalfIntegralMatrix, invariants
from siegel_lab.stabilize import (
    CoefficientTable,
    OperatorRouteUnavailable,
    apply_up0,
    dagger_relation_check,
    dagger_scalar,
    dagger_stabilize,
    divides,
    hecke_polys,
    lift_table,
    master_identity_check,
    master_identity_sides,
    p_closure,
    stabilize_closed,
    stabilize_operator,
    synthetic_plus,
    up0_eigen_check,
)

P = 17  # f_18 is ordinary at 17


@pytest.fixture(scope="module")
def ctx18(f18):
    return LiftContext(1, 9, f18, synthetic_plus(9, f18.field, f18, seed=11))


def test_genus2_hecke_polys(ctx18):
    polys = hecke_polys(satake_params(ctx18, P))
    r = polys.params.ring
    expected = poly.mul([-r.scalar(P**9), r.one], [-r.beta, r.one], zero=r.zero)
    assert polys.phi_star == expected
    assert polys.psi_star == expected
    assert polys.ratio() == r.one
    assert len(polys.phi) - 1 == 4


@pytest.mark.parametrize("n, k", [(1, 5), (2, 6), (2, 16)])
def test_polynomial_degrees_and_roots(n, k):
    ring = AlphaBetaRing(QuotientField.rationals(), 12345 * 7 + 3, 7, 2 * k)
    polys = hecke_polys(satake_params(eisenstein_context(n, k), 7, ring))
    assert len(polys.phi) - 1 == 2 ** (2 * n)
    assert len(polys.phi_star) - 1 == 2 ** (2 * n) - 2
    assert len(polys.psi_star) - 1 == n + 1
    unit = ring.alpha**n
    assert poly.evaluate(polys.phi, unit, one=ring.one).is_zero()
    assert not polys.at_unit_root("phi_star").is_zero()
    assert not polys.at_unit_root("psi_star").is_zero()
    assert divides(polys.phi_star, polys.phi)
    assert divides(polys.psi_star, polys.phi_star)


def test_operator_matches_closed_form(ctx18):
    rng = random.Random(21)
    Ts = random_genus2(rng, 50)
    Ts += [T.scale(P) for T in random_genus2(rng, 5)]
    op = stabilize_operator(ctx18, Ts, P)
    for T in Ts:
        assert op[T] == stabilize_closed(ctx18, T, P)


def test_unit_factor_when_p_divides_discriminant(ctx18):
    T = HalfIntegralMatrix.from_bracket([1, 17, 0])  # D = -68, fundamental
    inv = invariants(T)
    assert kronecker(inv.fundamental, P) == 0 and inv.conductor % P
    r = ctx18.ring(P)
    A = lift_coefficient(ctx18, T)
    assert stabilize_closed(ctx18, T, P) == r.scalar(A) * r.alpha**2


def test_showcase_closed_value(lift_ctxs):
    c12, _ = lift_ctxs
    r = c12.ring(11)
    T1 = HalfIntegralMatrix.from_bracket(SHOWCASE["T1"])
    assert stabilize_closed(c12, T1, 11) == (r.one - r.beta * Fraction(11) ** -6) * r.alpha**7


def test_non_ordinary_rejected(f18):
    ctx = LiftContext(1, 9, f18, synthetic_plus(9, f18.field, f18))
    with pytest.raises(NonOrdinaryError):
        stabilize_closed(ctx, HalfIntegralMatrix.from_bracket([1, 1, 1]), 11)


def test_operator_route_scope(lift_ctxs):
    c12, _ = lift_ctxs
    with pytest.raises(OperatorRouteUnavailable):
        stabilize_operator(c12, [HalfIntegralMatrix.from_bracket(SHOWCASE["T1"])], 11)


def test_up0_eigen(ctx18, lift_ctxs, showcase):
    rng = random.Random(4)
    assert up0_eigen_check(ctx18, random_genus2(rng, 25), P)
    c12, c32 = lift_ctxs
    assert up0_eigen_check(c12, list(showcase.values()), 11)


def test_eisenstein_closed_form_specialization():
    """At (alpha, beta) = (1, p^(2k-1)) the closed form is the stabilized Eisenstein coefficient."""
    n, k, p = 1, 5, 7
    ctx = eisenstein_context(n, k)
    rng = random.Random(6)
    for T in random_genus2(rng, 30):
        if invariants(T).conductor % p == 0:
            continue
        closed = stabilize_closed(ctx, T, p)
        value = stabilized_eisenstein_coeff(EisensteinContext(n, k, p), T)
        # alpha = 1: alpha powers drop, beta = p^(2k-1) turns the unit into 1 - chi p^(k-1)
        descended = lift_coefficient(ctx, T).to_rational() * (1 - kronecker(invariants(T).fundamental, p) * p ** (k - 1))
        assert value == descended
        # alpha^(n(n+1)) = 1 and beta p^(-k) = p^(k-1) after specializing alpha to 1
        assert (closed.c0 + closed.c1).to_rational() == value


def test_dagger_relation(ctx18):
    rng = random.Random(8)
    Ts = random_genus2(rng, 25)
    assert dagger_relation_check(ctx18, Ts, P)
    assert not dagger_relation_check(ctx18, Ts, P, literal=True)
    r = ctx18.ring(P)
    assert dagger_scalar(ctx18, P) == r.alpha - P**8
    assert dagger_scalar(ctx18, P, literal=True) == r.scalar(1 - P**8)


def test_dagger_literal_scalar_for_eisenstein():
    """With alpha specialized to 1 the literal scalar 1 - psi_0 is right."""
    ctx, p = eisenstein_context(1, 5), 7
    Ts = random_genus2(random.Random(3), 15)
    ratio = hecke_polys(satake_params(ctx, p)).ratio()
    dag = dagger_stabilize(ctx, Ts, p)
    star = stabilize_operator(ctx, Ts, p)
    literal = dagger_scalar(ctx, p, literal=True)

    def at_alpha_one(x):
        return (x.c0 + x.c1).to_rational()

    for T in Ts:
        assert at_alpha_one(ratio * dag[T]) == at_alpha_one(literal * star[T])


def test_dagger_is_up0_eigen(ctx18):
    rng = random.Random(10)
    Ts = random_genus2(rng, 10)
    dag = dagger_stabilize(ctx18, Ts + [T.scale(P) for T in Ts], P)
    r = ctx18.ring(P)
    for T in Ts:
        assert dag[T.scale(P)] == r.alpha * dag[T]


def test_apply_up0_table_semantics(ctx18):
    rng = random.Random(12)
    base = random_genus2(rng, 6)
    closure = p_closure(base, P, 2)
    tbl = lift_table(ctx18, closure)
    once = apply_up0(tbl, P, oracle=lambda T: lift_coefficient(ctx18, T))
    twice = apply_up0(once, P, oracle=lambda S: lift_coefficient(ctx18, S.scale(P)))
    for T in base:
        assert twice[T] == lift_coefficient(ctx18, T.scale(P * P))
        assert apply_up0(tbl.scale(3), P, oracle=lambda S: 3 * lift_coefficient(ctx18, S))[T] == 3 * once[T]


def test_apply_up0_eisenstein_matches_direct():
    ectx = EisensteinContext(1, 5, 7)
    Ts = random_genus2(random.Random(13), 10)
    tbl = CoefficientTable(2, 6, {T: stabilized_eisenstein_coeff(ectx, T) for T in Ts}, "eisenstein")
    moved = apply_up0(tbl, 7, oracle=lambda S: stabilized_eisenstein_coeff(ectx, S))
    for T in Ts:
        assert moved[T] == tbl[T]


def test_master_identity_examples():
    T = HalfIntegralMatrix.from_bracket([1, 1, 1])
    lhs, rhs = master_identity_sides(5, T)
    assert lhs == rhs and len(rhs) <= 2
    assert master_identity_check(5, [T])


@settings(max_examples=40)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(-40, 40), st.sampled_from([3, 5, 7, 11]))
def test_master_identity_property(a, c, b, p):
    if b * b >= 4 * a * c:
        return
    assert master_identity_check(p, [HalfIntegralMatrix.from_bracket([a, c, b])])


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_synthetic_operator_closed_agreement(seed):
    from siegel_lab.acceptance import eigenform

    f18 = eigenform(18)
    ctx = LiftContext(1, 9, f18, synthetic_plus(9, f18.field, f18, seed=seed))
    Ts = random_genus2(random.Random(seed), 3)
    op = stabilize_operator(ctx, Ts, P)
    assert all(op[T] == stabilize_closed(ctx, T, P) for T in Ts)
